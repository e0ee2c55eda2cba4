//! Gapped filtered A-infinity structures with optional g-action:
//! axiom checkers, bounding-cochain twists and evaluation at an equivariant
//! parameter.
//!
//! Operations are stored as dense multilinear tensors `m_{k,beta}` indexed
//! by arity and by an element of a discrete energy monoid. Structures over
//! complex doubles carry the integer grading and the full monoid; once the
//! energy weights `T^{omega(beta)}` are absorbed into Novikov coefficients
//! the monoid collapses and only the parity of the grading survives.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;

use crate::equivariant::LieAlgebraData;
use crate::linalg::Mat;
use crate::novikov::{NovikovScalar, Valuation};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Tensor storage guard: `dim^arity` may not exceed this.
const MAX_TENSOR_INPUTS: usize = 1 << 22;

/// Scalars that complex constants embed into; the g-action matrices stay
/// complex even when the tensors are Novikov-valued.
pub trait AScalar: Scalar {
    fn from_c(c: Complex64) -> Self;
}

impl AScalar for Complex64 {
    fn from_c(c: Complex64) -> Self {
        c
    }
}

impl AScalar for NovikovScalar {
    fn from_c(c: Complex64) -> Self {
        NovikovScalar::from_complex(c)
    }
}

/// A finitely enumerated piece of a discrete submonoid of
/// `2Z x R_{>=0}`: all elements with energy at most the cutoff.
///
/// Energies are stored as exact rationals (the symplectic area divided by
/// 2 pi, so they add like plain exponents of `T`).
#[derive(Clone, Debug, PartialEq)]
pub struct GappedMonoid {
    classes: Vec<(i64, Rational64)>,
    index: BTreeMap<(i64, Rational64), usize>,
    cutoff: Rational64,
}

impl GappedMonoid {
    /// Enumerates the monoid generated by `generators` up to the energy
    /// cutoff. Discreteness caps the element count at 64.
    pub fn generate(generators: &[(i64, Rational64)], cutoff: Rational64) -> Result<Self> {
        for &(mu, omega) in generators {
            if mu % 2 != 0 {
                return Err(Error::input(format!("odd Maslov index {mu} in monoid")));
            }
            if omega <= Rational64::zero() {
                return Err(Error::input(
                    "monoid generators need strictly positive energy",
                ));
            }
        }
        let mut classes: Vec<(i64, Rational64)> = vec![(0, Rational64::zero())];
        let mut frontier = classes.clone();
        while let Some(base) = frontier.pop() {
            for &(mu, omega) in generators {
                let next = (base.0 + mu, base.1 + omega);
                if next.1 > cutoff || classes.contains(&next) {
                    continue;
                }
                classes.push(next);
                frontier.push(next);
                if classes.len() > 64 {
                    return Err(Error::input(
                        "monoid has more than 64 elements below the cutoff",
                    ));
                }
            }
        }
        classes.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let index = classes
            .iter()
            .copied()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        Ok(GappedMonoid {
            classes,
            index,
            cutoff,
        })
    }

    /// The monoid containing only the zero class.
    pub fn trivial(cutoff: Rational64) -> Self {
        GappedMonoid::generate(&[], cutoff).expect("trivial monoid")
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn cutoff(&self) -> Rational64 {
        self.cutoff
    }

    pub fn maslov(&self, idx: usize) -> i64 {
        self.classes[idx].0
    }

    pub fn energy(&self, idx: usize) -> Rational64 {
        self.classes[idx].1
    }

    pub fn zero_index(&self) -> usize {
        self.index[&(0, Rational64::zero())]
    }

    pub fn find(&self, mu: i64, omega: Rational64) -> Option<usize> {
        self.index.get(&(mu, omega)).copied()
    }

    /// All ordered pairs `(i, j)` with `class_i + class_j = class_k`.
    pub fn splits(&self, k: usize) -> Vec<(usize, usize)> {
        let (mu, omega) = self.classes[k];
        let mut out = Vec::new();
        for (i, &(m1, o1)) in self.classes.iter().enumerate() {
            if o1 > omega {
                continue;
            }
            if let Some(j) = self.find(mu - m1, omega - o1) {
                out.push((i, j));
            }
        }
        out
    }
}

/// Dense multilinear map: `dim^arity` inputs by `dim` outputs.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<S> {
    arity: usize,
    dim: usize,
    data: Vec<S>,
}

impl<S: AScalar> Tensor<S> {
    fn zeros(arity: usize, dim: usize) -> Result<Self> {
        let inputs = dim.checked_pow(arity as u32).filter(|&n| n <= MAX_TENSOR_INPUTS);
        let Some(inputs) = inputs else {
            return Err(Error::input(format!(
                "tensor of arity {arity} over dimension {dim} exceeds the storage bound"
            )));
        };
        Ok(Tensor {
            arity,
            dim,
            data: vec![S::zero(); inputs * dim],
        })
    }

    fn offset(&self, inputs: &[usize]) -> usize {
        debug_assert_eq!(inputs.len(), self.arity);
        let mut idx = 0;
        for &i in inputs {
            idx = idx * self.dim + i;
        }
        idx * self.dim
    }

    pub fn get(&self, inputs: &[usize], out: usize) -> &S {
        &self.data[self.offset(inputs) + out]
    }

    pub fn set(&mut self, inputs: &[usize], out: usize, v: S) {
        let o = self.offset(inputs);
        self.data[o + out] = v;
    }

    fn add_assign(&mut self, inputs: &[usize], out: usize, v: &S) {
        let o = self.offset(inputs) + out;
        self.data[o] = self.data[o].add(v);
    }

    /// Output vector on basis inputs.
    pub fn apply_basis(&self, inputs: &[usize]) -> Vec<S> {
        let o = self.offset(inputs);
        self.data[o..o + self.dim].to_vec()
    }

    /// Output vector on mixed arguments: basis indices or general vectors.
    pub fn apply_mixed(&self, args: &[Arg<'_, S>]) -> Vec<S> {
        let vector_slots: Vec<usize> = args
            .iter()
            .enumerate()
            .filter(|(_, a)| matches!(a, Arg::Vector(_)))
            .map(|(i, _)| i)
            .collect();
        let mut out = vec![S::zero(); self.dim];
        let combos = self.dim.pow(vector_slots.len() as u32);
        let mut basis_inputs: Vec<usize> = args
            .iter()
            .map(|a| match a {
                Arg::Basis(i) => *i,
                Arg::Vector(_) => 0,
            })
            .collect();
        for combo in 0..combos {
            let mut c = combo;
            let mut weight = S::one();
            for &slot in &vector_slots {
                let pick = c % self.dim;
                c /= self.dim;
                basis_inputs[slot] = pick;
                let Arg::Vector(v) = args[slot] else { unreachable!() };
                weight = weight.mul(&v[pick]);
                if weight.is_zero() {
                    break;
                }
            }
            if weight.is_zero() {
                continue;
            }
            let o = self.offset(&basis_inputs);
            for j in 0..self.dim {
                let t = &self.data[o + j];
                if !t.is_zero() {
                    out[j] = out[j].add(&t.mul(&weight));
                }
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

/// Argument of a multilinear map: a basis element or a coefficient vector.
pub enum Arg<'a, S> {
    Basis(usize),
    Vector(&'a [S]),
}

/// The g-action on an A-infinity algebra: interior products and Lie
/// derivatives per Lie-algebra basis element, plus the algebra itself so
/// abelianness is decidable.
#[derive(Clone, Debug)]
pub struct GAction {
    pub algebra: LieAlgebraData,
    pub interior: Vec<Mat<Complex64>>,
    pub lie: Vec<Mat<Complex64>>,
}

impl GAction {
    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    fn apply<S: AScalar>(mat: &Mat<Complex64>, v: &[S]) -> Vec<S> {
        (0..mat.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let c = mat.get(i, j);
                    if !Scalar::is_zero(c) && !x.is_zero() {
                        acc = acc.add(&x.mul(&S::from_c(*c)));
                    }
                }
                acc
            })
            .collect()
    }

    fn column<S: AScalar>(mat: &Mat<Complex64>, j: usize) -> Vec<S> {
        (0..mat.rows).map(|i| S::from_c(*mat.get(i, j))).collect()
    }
}

/// A unital gapped filtered A-infinity structure on a small graded basis.
#[derive(Clone, Debug)]
pub struct GappedAInfty<S> {
    pub degrees: Vec<i64>,
    pub unit: usize,
    pub monoid: GappedMonoid,
    pub max_arity: usize,
    /// When set, grading statements are checked modulo 2 only (the Novikov
    /// side of the story).
    pub graded_mod2: bool,
    tensors: BTreeMap<(usize, usize), Tensor<S>>,
    pub g_action: Option<GAction>,
}

/// Residual table keyed by `(arity, monoid index)`.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub residuals: BTreeMap<(usize, usize), f64>,
    pub tolerance: f64,
}

impl ResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.max_residual() < self.tolerance
    }

    pub fn worst(&self) -> Option<((usize, usize), f64)> {
        self.residuals
            .iter()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(&k, &v)| (k, v))
    }
}

/// Joint report for the interior-product and Lie-derivative compatibilities.
#[derive(Clone, Debug)]
pub struct GDiffCompatReport {
    pub interior: ResidualReport,
    pub lie: ResidualReport,
    /// Residual of `i_X(1) = 0` and `L_X(1) = 0`.
    pub unit_action: f64,
}

impl GDiffCompatReport {
    pub fn pass(&self) -> bool {
        self.interior.pass() && self.lie.pass() && self.unit_action < self.interior.tolerance
    }

    pub fn max_residual(&self) -> f64 {
        self.interior
            .max_residual()
            .max(self.lie.max_residual())
            .max(self.unit_action)
    }
}

pub const AINFTY_TOLERANCE: f64 = 1e-9;

impl<S: AScalar> GappedAInfty<S> {
    /// Fresh structure with all tensors zero.
    pub fn new(
        degrees: Vec<i64>,
        unit: usize,
        monoid: GappedMonoid,
        max_arity: usize,
    ) -> Result<Self> {
        let dim = degrees.len();
        if dim == 0 || dim > 4 {
            return Err(Error::input("basis dimension must be between 1 and 4"));
        }
        if unit >= dim || degrees[unit] != 0 {
            return Err(Error::input("unit must be a degree-zero basis element"));
        }
        let mut tensors = BTreeMap::new();
        for k in 0..=max_arity {
            for b in 0..monoid.len() {
                tensors.insert((k, b), Tensor::zeros(k, dim)?);
            }
        }
        Ok(GappedAInfty {
            degrees,
            unit,
            monoid,
            max_arity,
            graded_mod2: false,
            tensors,
            g_action: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn tensor(&self, k: usize, beta: usize) -> Result<&Tensor<S>> {
        self.tensors.get(&(k, beta)).ok_or_else(|| {
            Error::input(format!(
                "missing operation tensor for arity {k}, class index {beta}"
            ))
        })
    }

    pub fn tensor_mut(&mut self, k: usize, beta: usize) -> Result<&mut Tensor<S>> {
        self.tensors.get_mut(&(k, beta)).ok_or_else(|| {
            Error::input(format!(
                "missing operation tensor for arity {k}, class index {beta}"
            ))
        })
    }

    pub fn set_entry(&mut self, k: usize, beta: usize, inputs: &[usize], out: usize, v: S) {
        self.tensors
            .get_mut(&(k, beta))
            .expect("tensor exists")
            .set(inputs, out, v);
    }

    /// Installs the standard unital product at `(2, 0)`:
    /// `m_2(1, x) = x`, `m_2(x, 1) = (-1)^{|x|} x`.
    pub fn install_unit_product(&mut self) {
        let unit = self.unit;
        let dim = self.dim();
        let degrees = self.degrees.clone();
        let zero_beta = self.monoid.zero_index();
        let t = self.tensors.get_mut(&(2, zero_beta)).expect("m_{2,0}");
        for x in 0..dim {
            t.set(&[unit, x], x, S::one());
            if x != unit {
                let sign = if degrees[x] % 2 != 0 {
                    S::one().neg()
                } else {
                    S::one()
                };
                t.set(&[x, unit], x, sign);
            }
        }
    }

    fn shifted_degree(&self, i: usize) -> i64 {
        self.degrees[i] - 1
    }

    /// Iterates over all basis input tuples of the given arity.
    fn tuples(&self, k: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let dim = self.dim();
        (0..dim.pow(k as u32)).map(move |mut idx| {
            let mut t = vec![0usize; k];
            unpack_tuple(&mut t, dim, &mut idx);
            t
        })
    }

    /// A-infinity relations for every `(k, beta)` whose constituent tensors
    /// are all stored, plus grading homogeneity of each stored tensor.
    pub fn check_ainfty(&self) -> Result<ResidualReport> {
        let mut residuals = BTreeMap::new();
        // grading homogeneity folded into the (k, beta) entry
        for k in 0..self.max_arity {
            for beta in 0..self.monoid.len() {
                let mut worst = self.grading_residual(k, beta)?;
                for inputs in self.tuples(k) {
                    let acc = self.ainfty_defect(k, beta, &inputs)?;
                    for v in &acc {
                        worst = worst.max(v.residual_norm());
                    }
                }
                residuals.insert((k, beta), worst);
            }
        }
        Ok(ResidualReport {
            residuals,
            tolerance: AINFTY_TOLERANCE,
        })
    }

    /// The defect of the A-infinity relation at `(k, beta)` on one tuple.
    fn ainfty_defect(&self, k: usize, beta: usize, inputs: &[usize]) -> Result<Vec<S>> {
        let mut acc = vec![S::zero(); self.dim()];
        for (b1, b2) in self.monoid.splits(beta) {
            for k2 in 0..=k {
                let k1 = k + 1 - k2;
                if k1 > self.max_arity || k2 > self.max_arity {
                    continue;
                }
                let outer = self.tensor(k1, b1)?;
                let inner = self.tensor(k2, b2)?;
                for i in 0..=(k - k2) {
                    // skip the two (1,0)-identity aliases of the same term:
                    // nothing to skip; m_{1,0} is just a stored tensor here.
                    let inner_out = inner.apply_basis(&inputs[i..i + k2]);
                    if inner_out.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    let sign_exp: i64 = inputs[..i]
                        .iter()
                        .map(|&x| self.shifted_degree(x))
                        .sum();
                    let mut args: Vec<Arg<'_, S>> = Vec::with_capacity(k1);
                    for &x in &inputs[..i] {
                        args.push(Arg::Basis(x));
                    }
                    args.push(Arg::Vector(&inner_out));
                    for &x in &inputs[i + k2..] {
                        args.push(Arg::Basis(x));
                    }
                    let term = outer.apply_mixed(&args);
                    let negate = sign_exp.rem_euclid(2) == 1;
                    for (a, t) in acc.iter_mut().zip(term) {
                        *a = if negate { a.sub(&t) } else { a.add(&t) };
                    }
                }
            }
        }
        Ok(acc)
    }

    /// Residual of the grading: entries must respect
    /// `|out| = sum |x_i| + 2 - k - maslov(beta)` (mod 2 on the Novikov side).
    fn grading_residual(&self, k: usize, beta: usize) -> Result<f64> {
        let t = self.tensor(k, beta)?;
        let mu = self.monoid.maslov(beta);
        let mut worst = 0.0f64;
        for inputs in self.tuples(k) {
            let expected: i64 =
                inputs.iter().map(|&x| self.degrees[x]).sum::<i64>() + 2 - k as i64 - mu;
            for out in 0..self.dim() {
                let v = t.get(&inputs, out);
                if v.is_zero() {
                    continue;
                }
                let diff = self.degrees[out] - expected;
                let bad = if self.graded_mod2 {
                    diff.rem_euclid(2) != 0
                } else {
                    diff != 0
                };
                if bad {
                    worst = worst.max(v.residual_norm());
                }
            }
        }
        Ok(worst)
    }

    /// The two displayed unit equations.
    pub fn check_unitality(&self) -> Result<ResidualReport> {
        let mut residuals = BTreeMap::new();
        let unit = self.unit;
        let zero_beta = self.monoid.zero_index();
        for k in 1..=self.max_arity {
            for beta in 0..self.monoid.len() {
                let t = self.tensor(k, beta)?;
                let mut worst = 0.0f64;
                for inputs in self.tuples(k) {
                    if !inputs.contains(&unit) {
                        continue;
                    }
                    let is_product = k == 2 && beta == zero_beta;
                    let out = t.apply_basis(&inputs);
                    if !is_product {
                        for v in &out {
                            worst = worst.max(v.residual_norm());
                        }
                        continue;
                    }
                    // m_{2,0}(1, x) = x and m_{2,0}(x, 1) = (-1)^{|x|} x
                    let (x, expected): (usize, Vec<S>) = if inputs[0] == unit {
                        let mut e = vec![S::zero(); self.dim()];
                        e[inputs[1]] = S::one();
                        (inputs[1], e)
                    } else {
                        let mut e = vec![S::zero(); self.dim()];
                        e[inputs[0]] = if self.degrees[inputs[0]] % 2 != 0 {
                            S::one().neg()
                        } else {
                            S::one()
                        };
                        (inputs[0], e)
                    };
                    let _ = x;
                    for (a, b) in out.iter().zip(expected.iter()) {
                        worst = worst.max(a.sub(b).residual_norm());
                    }
                }
                residuals.insert((k, beta), worst);
            }
        }
        Ok(ResidualReport {
            residuals,
            tolerance: AINFTY_TOLERANCE,
        })
    }

    /// Compatibility with the g-action: the interior-product equation for
    /// all `(k, beta) != (1, 0)`, the Lie-derivative equation everywhere,
    /// and the vanishing of the action on the unit.
    pub fn check_gdiff_compat(&self) -> Result<GDiffCompatReport> {
        let Some(action) = &self.g_action else {
            return Err(Error::input("no g-action attached to this algebra"));
        };
        let zero_beta = self.monoid.zero_index();
        let mut interior = BTreeMap::new();
        let mut lie = BTreeMap::new();
        let mut unit_action = 0.0f64;
        for x in 0..action.rank() {
            let iu: Vec<S> = GAction::column(&action.interior[x], self.unit);
            let lu: Vec<S> = GAction::column(&action.lie[x], self.unit);
            for v in iu.iter().chain(lu.iter()) {
                unit_action = unit_action.max(v.residual_norm());
            }
        }
        for k in 0..=self.max_arity {
            for beta in 0..self.monoid.len() {
                let t = self.tensor(k, beta)?;
                let mut worst_i = 0.0f64;
                let mut worst_l = 0.0f64;
                for inputs in self.tuples(k) {
                    let out = t.apply_basis(&inputs);
                    for (x, (imat, lmat)) in self
                        .g_action
                        .as_ref()
                        .unwrap()
                        .interior
                        .iter()
                        .zip(&self.g_action.as_ref().unwrap().lie)
                        .enumerate()
                    {
                        let _ = x;
                        // interior: skip (1, 0)
                        if !(k == 1 && beta == zero_beta) {
                            let mut acc: Vec<S> = GAction::apply(imat, &out);
                            for i in 0..k {
                                let sign_exp: i64 = inputs[..i]
                                    .iter()
                                    .map(|&y| self.shifted_degree(y))
                                    .sum();
                                let ix: Vec<S> = GAction::column(imat, inputs[i]);
                                let mut args: Vec<Arg<'_, S>> = Vec::with_capacity(k);
                                for &y in &inputs[..i] {
                                    args.push(Arg::Basis(y));
                                }
                                args.push(Arg::Vector(&ix));
                                for &y in &inputs[i + 1..] {
                                    args.push(Arg::Basis(y));
                                }
                                let term = t.apply_mixed(&args);
                                let negate = sign_exp.rem_euclid(2) == 1;
                                for (a, v) in acc.iter_mut().zip(term) {
                                    *a = if negate { a.sub(&v) } else { a.add(&v) };
                                }
                            }
                            for v in &acc {
                                worst_i = worst_i.max(v.residual_norm());
                            }
                        }
                        // Lie derivative: L m(xs) - sum m(.., L x_i, ..) = 0
                        let mut acc: Vec<S> = GAction::apply(lmat, &out);
                        for i in 0..k {
                            let lx: Vec<S> = GAction::column(lmat, inputs[i]);
                            let mut args: Vec<Arg<'_, S>> = Vec::with_capacity(k);
                            for &y in &inputs[..i] {
                                args.push(Arg::Basis(y));
                            }
                            args.push(Arg::Vector(&lx));
                            for &y in &inputs[i + 1..] {
                                args.push(Arg::Basis(y));
                            }
                            let term = t.apply_mixed(&args);
                            for (a, v) in acc.iter_mut().zip(term) {
                                *a = a.sub(&v);
                            }
                        }
                        for v in &acc {
                            worst_l = worst_l.max(v.residual_norm());
                        }
                    }
                }
                interior.insert((k, beta), worst_i);
                lie.insert((k, beta), worst_l);
            }
        }
        Ok(GDiffCompatReport {
            interior: ResidualReport {
                residuals: interior,
                tolerance: AINFTY_TOLERANCE,
            },
            lie: ResidualReport {
                residuals: lie,
                tolerance: AINFTY_TOLERANCE,
            },
            unit_action,
        })
    }
}

fn unpack_tuple(t: &mut [usize], dim: usize, idx: &mut usize) {
    for slot in t.iter_mut().rev() {
        *slot = *idx % dim;
        *idx /= dim;
    }
}

impl GappedAInfty<Complex64> {
    /// Absorbs the energy weights into Novikov coefficients:
    /// `m_k := sum_beta T^{omega(beta)} m_{k,beta}` on the same basis.
    ///
    /// This is the associated curved structure over the Novikov field; the
    /// output monoid is trivial and the grading drops to parities.
    pub fn collapse(&self, cutoff: Rational64) -> Result<GappedAInfty<NovikovScalar>> {
        let mut out = GappedAInfty::<NovikovScalar>::new(
            self.degrees.clone(),
            self.unit,
            GappedMonoid::trivial(cutoff),
            self.max_arity,
        )?;
        out.graded_mod2 = true;
        out.g_action = self.g_action.clone();
        let prec = Valuation::Finite(cutoff);
        for k in 0..=self.max_arity {
            let target = out.tensor_mut(k, 0)?;
            for beta in 0..self.monoid.len() {
                let omega = self.monoid.energy(beta);
                if omega > cutoff {
                    continue;
                }
                let src = self.tensors.get(&(k, beta)).expect("tensor exists");
                for (flat, v) in src.data.iter().enumerate() {
                    if Scalar::is_zero(v) {
                        continue;
                    }
                    let contrib =
                        NovikovScalar::from_terms(vec![(omega, *v)], prec);
                    target.data[flat] = target.data[flat].add(&contrib);
                }
            }
        }
        Ok(out)
    }

    /// Restriction to the g-invariant part followed by collapse and the
    /// `-(sum_i lambda_i i_{e_i})` correction of the differential.
    ///
    /// Requires an abelian g-action; the parameter must lie in the Novikov
    /// ring (nonnegative valuations).
    pub fn evaluate_lambda(
        &self,
        lambda: &[NovikovScalar],
        cutoff: Rational64,
    ) -> Result<GappedAInfty<NovikovScalar>> {
        let Some(action) = &self.g_action else {
            return Err(Error::input("no g-action attached to this algebra"));
        };
        if !action.algebra.is_abelian() {
            return Err(Error::hypothesis("evaluation requires abelian g"));
        }
        if lambda.len() != action.rank() {
            return Err(Error::input(format!(
                "parameter has {} components, g has rank {}",
                lambda.len(),
                action.rank()
            )));
        }
        for l in lambda {
            if l.val() < Valuation::Finite(Rational64::zero()) {
                return Err(Error::hypothesis(
                    "equivariant parameter must lie in the Novikov ring (val >= 0)",
                ));
            }
        }
        // The invariant part: for the models in this crate the Lie
        // derivatives vanish identically; a nontrivial L would require a
        // genuine basis change, which is out of scope here.
        if action.lie.iter().any(|m| !m.is_zero()) {
            return Err(Error::input(
                "evaluation implemented for trivially invariant bases (L = 0) only",
            ));
        }
        let mut out = self.collapse(cutoff)?;
        // m_1 correction: subtract sum_i lambda_i i_{e_i}
        let dim = self.dim();
        let interiors = action.interior.clone();
        let t1 = out.tensor_mut(1, 0)?;
        for (i, l) in lambda.iter().enumerate() {
            for from in 0..dim {
                for to in 0..dim {
                    let c = interiors[i].get(to, from);
                    if Scalar::is_zero(c) {
                        continue;
                    }
                    let v = t1
                        .get(&[from], to)
                        .sub(&l.scale(*c).truncate_lenient(cutoff));
                    t1.set(&[from], to, v);
                }
            }
        }
        Ok(out)
    }

    /// Bounding-cochain twist at the complex level: validates the candidate
    /// against the strict differential and the interior products, then
    /// collapses and twists.
    pub fn deform(
        &self,
        b_plus: &[NovikovScalar],
        cutoff: Rational64,
    ) -> Result<GappedAInfty<NovikovScalar>> {
        self.validate_candidate(b_plus)?;
        self.collapse(cutoff)?.twist(b_plus, cutoff)
    }

    fn validate_candidate(&self, b_plus: &[NovikovScalar]) -> Result<()> {
        if b_plus.len() != self.dim() {
            return Err(Error::input("candidate vector has the wrong dimension"));
        }
        for (i, c) in b_plus.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.degrees[i] != 1 {
                return Err(Error::hypothesis(
                    "not a bounding-cochain candidate: support must be in degree 1",
                ));
            }
            if c.val() <= Valuation::Finite(Rational64::zero()) {
                return Err(Error::hypothesis(
                    "not a bounding-cochain candidate: coefficients need positive valuation",
                ));
            }
        }
        // delta b_+ = 0 with delta = m_{1,0}
        let zero_beta = self.monoid.zero_index();
        let t1 = self.tensor(1, zero_beta)?;
        let mut image = vec![NovikovScalar::zero(); self.dim()];
        for (j, c) in b_plus.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for out in 0..self.dim() {
                let w = t1.get(&[j], out);
                if !Scalar::is_zero(w) {
                    image[out] = image[out].add(&c.scale(*w));
                }
            }
        }
        if image.iter().any(|v| !v.is_zero()) {
            return Err(Error::hypothesis(
                "not a bounding-cochain candidate: delta b_+ != 0",
            ));
        }
        // i_X b_+ must be a positive-valuation multiple of the unit
        if let Some(action) = &self.g_action {
            for imat in &action.interior {
                let ib: Vec<NovikovScalar> = (0..self.dim())
                    .map(|to| {
                        let mut acc = NovikovScalar::zero();
                        for (j, c) in b_plus.iter().enumerate() {
                            let w = imat.get(to, j);
                            if !Scalar::is_zero(w) && !c.is_zero() {
                                acc = acc.add(&c.scale(*w));
                            }
                        }
                        acc
                    })
                    .collect();
                for (idx, v) in ib.iter().enumerate() {
                    if idx != self.unit && !v.is_zero() {
                        return Err(Error::hypothesis(
                            "not a bounding-cochain candidate: i_X b_+ not a multiple of the unit",
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

impl GappedAInfty<NovikovScalar> {
    /// Inserts copies of `b_plus` into every slot pattern, weighted by the
    /// stored (already energy-absorbed) tensors. The arity of the output is
    /// reduced by the largest insertion count the cutoff admits.
    pub fn twist(
        &self,
        b_plus: &[NovikovScalar],
        cutoff: Rational64,
    ) -> Result<GappedAInfty<NovikovScalar>> {
        if b_plus.len() != self.dim() {
            return Err(Error::input("candidate vector has the wrong dimension"));
        }
        let b_val = b_plus
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.val())
            .min()
            .unwrap_or(Valuation::Infinite);
        let l_max = match b_val {
            Valuation::Infinite => 0,
            Valuation::Finite(v) => {
                if v <= Rational64::zero() {
                    return Err(Error::hypothesis(
                        "twist requires positive-valuation coefficients",
                    ));
                }
                let mut l = 0usize;
                while Rational64::from_integer((l + 1) as i64) * v < cutoff {
                    l += 1;
                }
                l
            }
        };
        let out_arity = self.max_arity.saturating_sub(l_max);
        if out_arity < 2 {
            return Err(Error::input(format!(
                "stored arity {} cannot absorb {l_max} insertions below cutoff {}",
                self.max_arity, cutoff
            )));
        }
        let mut out = GappedAInfty::<NovikovScalar>::new(
            self.degrees.clone(),
            self.unit,
            GappedMonoid::trivial(cutoff),
            out_arity,
        )?;
        out.graded_mod2 = true;
        out.g_action = self.g_action.clone();
        for k in 0..=out_arity {
            let mut target = Tensor::<NovikovScalar>::zeros(k, self.dim())?;
            for inputs in self.tuples(k).collect::<Vec<_>>() {
                for l in 0..=l_max {
                    if k + l > self.max_arity {
                        break;
                    }
                    let src = self.tensor(k + l, 0)?;
                    // all ways to distribute l insertions into k+1 gaps
                    let mut pattern = vec![0usize; k + 1];
                    distribute(&mut pattern, 0, l, &mut |pat| {
                        let mut args: Vec<Arg<'_, NovikovScalar>> =
                            Vec::with_capacity(k + l);
                        for (slot, &count) in pat.iter().enumerate() {
                            for _ in 0..count {
                                args.push(Arg::Vector(b_plus));
                            }
                            if slot < k {
                                args.push(Arg::Basis(inputs[slot]));
                            }
                        }
                        let term = src.apply_mixed(&args);
                        for (o, v) in term.into_iter().enumerate() {
                            if !v.is_zero() {
                                target.add_assign(&inputs, o, &v.truncate_lenient(cutoff));
                            }
                        }
                    });
                }
            }
            *out.tensor_mut(k, 0)? = target;
        }
        Ok(out)
    }

    /// The curvature `m_0(1)` as a vector over the basis.
    pub fn curvature(&self) -> Result<Vec<NovikovScalar>> {
        Ok(self.tensor(0, 0)?.apply_basis(&[]))
    }

    /// The curvature when it is a multiple of the unit.
    pub fn curvature_scalar(&self) -> Result<NovikovScalar> {
        let v = self.curvature()?;
        for (i, c) in v.iter().enumerate() {
            if i != self.unit && !c.is_zero() {
                return Err(Error::numerics(
                    "curvature is not a scalar multiple of the unit",
                ));
            }
        }
        Ok(v[self.unit].clone())
    }

    /// `m_k` applied to `k` copies of one basis element.
    pub fn power_value(&self, k: usize, basis: usize) -> Result<Vec<NovikovScalar>> {
        let inputs = vec![basis; k];
        Ok(self.tensor(k, 0)?.apply_basis(&inputs))
    }
}

/// Enumerates all splittings of `remaining` into `pattern[pos..]`.
fn distribute(
    pattern: &mut Vec<usize>,
    pos: usize,
    remaining: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if pos + 1 == pattern.len() {
        pattern[pos] = remaining;
        f(pattern);
        return;
    }
    for take in 0..=remaining {
        pattern[pos] = take;
        distribute(pattern, pos + 1, remaining - take, f);
    }
}
