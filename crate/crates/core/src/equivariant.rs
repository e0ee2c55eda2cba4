//! Finite-dimensional g-differential spaces, truncated Weil algebras,
//! Weil/Cartan models and the Mathai-Quillen morphism.
//!
//! Everything here runs over exact complex rationals: the five Cartan
//! calculus identities and the model differentials are matrix identities
//! that must hold with residual exactly zero.
//!
//! The Weil algebra is infinite dimensional, so it is truncated at a maximal
//! symmetric degree `D` in the curvature generators. Operators that push a
//! monomial past the truncation are recorded as overflowing, and every
//! reported quantity (differentials squaring to zero, cohomology dimensions,
//! the Mathai-Quillen intertwining) is restricted to the range the
//! truncation cannot corrupt.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;

use crate::linalg::Mat;
use crate::scalar::{CRat, Scalar};
use crate::{Error, Result};

/// A complex Lie algebra given by structure constants `c^i_{jk}` in a fixed
/// basis.
#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    rank: usize,
    /// `c[i][j][k]` is the coefficient of `e_i` in `[e_j, e_k]`.
    c: Vec<Vec<Vec<Rational64>>>,
}

impl LieAlgebraData {
    pub fn new(rank: usize, c: Vec<Vec<Vec<Rational64>>>) -> Result<Self> {
        let alg = LieAlgebraData { rank, c };
        alg.validate()?;
        Ok(alg)
    }

    /// The abelian Lie algebra of the given rank.
    pub fn abelian(rank: usize) -> Self {
        LieAlgebraData {
            rank,
            c: vec![vec![vec![Rational64::zero(); rank]; rank]; rank],
        }
    }

    /// so(3) with `[e_j, e_k] = sum_i eps_{ijk} e_i`.
    pub fn so3() -> Self {
        let mut c = vec![vec![vec![Rational64::zero(); 3]; 3]; 3];
        for (i, j, k, s) in [
            (0, 1, 2, 1),
            (0, 2, 1, -1),
            (1, 2, 0, 1),
            (1, 0, 2, -1),
            (2, 0, 1, 1),
            (2, 1, 0, -1),
        ] {
            c[i][j][k] = Rational64::from_integer(s);
        }
        LieAlgebraData { rank: 3, c }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rational64 {
        self.c[i][j][k]
    }

    pub fn is_abelian(&self) -> bool {
        self.c
            .iter()
            .flatten()
            .flatten()
            .all(|x| x.is_zero())
    }

    fn validate(&self) -> Result<()> {
        let r = self.rank;
        if self.c.len() != r || self.c.iter().any(|m| m.len() != r || m.iter().any(|v| v.len() != r)) {
            return Err(Error::input("structure constant tensor has wrong shape"));
        }
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    if self.c[i][j][k] != -self.c[i][k][j] {
                        return Err(Error::input(format!(
                            "structure constants not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        // Jacobi: sum_m c^m_{jk} c^i_{lm} + c^m_{kl} c^i_{jm} + c^m_{lj} c^i_{km} = 0.
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let mut acc = Rational64::zero();
                        for m in 0..r {
                            acc += self.c[m][j][k] * self.c[i][l][m]
                                + self.c[m][k][l] * self.c[i][j][m]
                                + self.c[m][l][j] * self.c[i][k][m];
                        }
                        if !acc.is_zero() {
                            return Err(Error::input(format!(
                                "Jacobi identity fails at ({i},{j},{k},{l})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Finite-dimensional g-differential space: graded basis plus the matrices
/// of the differential, the interior products and the Lie derivatives.
///
/// Operator matrices act on coordinate columns: `(Av)_i = sum_j A[i][j] v_j`.
#[derive(Clone, Debug)]
pub struct GDiffSpace {
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub algebra: LieAlgebraData,
    pub delta: Mat<CRat>,
    pub interior: Vec<Mat<CRat>>,
    pub lie: Vec<Mat<CRat>>,
}

/// Residual report for the five g-differential axioms plus the grading
/// compatibility of the operators.
#[derive(Clone, Debug)]
pub struct GDiffAxiomReport {
    pub degree_consistency: f64,
    pub delta_squares: f64,
    pub delta_lie: f64,
    pub cartan_magic: f64,
    pub lie_lie: f64,
    pub lie_interior: f64,
    pub interior_interior: f64,
}

impl GDiffAxiomReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.degree_consistency,
            self.delta_squares,
            self.delta_lie,
            self.cartan_magic,
            self.lie_lie,
            self.lie_interior,
            self.interior_interior,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.max_residual() == 0.0
    }
}

impl GDiffSpace {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn rank(&self) -> usize {
        self.algebra.rank()
    }

    fn check_shapes(&self) -> Result<()> {
        let n = self.dim();
        let r = self.rank();
        if self.labels.len() != n {
            return Err(Error::input("label/degree length mismatch"));
        }
        let square = |m: &Mat<CRat>| m.rows == n && m.cols == n;
        if !square(&self.delta)
            || self.interior.len() != r
            || self.lie.len() != r
            || !self.interior.iter().all(square)
            || !self.lie.iter().all(square)
        {
            return Err(Error::input(
                "operator matrices are not square of the basis dimension",
            ));
        }
        Ok(())
    }

    /// Largest entry violating `A` being homogeneous of degree `d`.
    fn degree_residual(&self, a: &Mat<CRat>, d: i64) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if self.degrees[i] != self.degrees[j] + d {
                    worst = worst.max(a.get(i, j).residual_norm());
                }
            }
        }
        worst
    }

    /// The five matrix identities of a g-differential space.
    pub fn check_gdiff_axioms(&self) -> Result<GDiffAxiomReport> {
        self.check_shapes()?;
        let r = self.rank();
        let mut degree_consistency = self.degree_residual(&self.delta, 1);
        for j in 0..r {
            degree_consistency = degree_consistency
                .max(self.degree_residual(&self.interior[j], -1))
                .max(self.degree_residual(&self.lie[j], 0));
        }
        let delta_squares = self.delta.matmul(&self.delta).max_norm();
        let mut delta_lie = 0.0f64;
        let mut cartan_magic = 0.0f64;
        let mut lie_lie = 0.0f64;
        let mut lie_interior = 0.0f64;
        let mut interior_interior = 0.0f64;
        for x in 0..r {
            delta_lie = delta_lie.max(self.delta.commutator(&self.lie[x]).max_norm());
            cartan_magic = cartan_magic.max(
                self.delta
                    .anticommutator(&self.interior[x])
                    .sub(&self.lie[x])
                    .max_norm(),
            );
            for y in 0..r {
                let mut bracket_l: Mat<CRat> = Mat::zeros(self.dim(), self.dim());
                let mut bracket_i: Mat<CRat> = Mat::zeros(self.dim(), self.dim());
                for m in 0..r {
                    let cc = CRat::from_rational(self.algebra.structure_constant(m, x, y));
                    bracket_l = bracket_l.add(&self.lie[m].scale(&cc));
                    bracket_i = bracket_i.add(&self.interior[m].scale(&cc));
                }
                lie_lie = lie_lie.max(
                    self.lie[x]
                        .commutator(&self.lie[y])
                        .sub(&bracket_l)
                        .max_norm(),
                );
                lie_interior = lie_interior.max(
                    self.lie[x]
                        .commutator(&self.interior[y])
                        .sub(&bracket_i)
                        .max_norm(),
                );
                interior_interior = interior_interior.max(
                    self.interior[x]
                        .anticommutator(&self.interior[y])
                        .max_norm(),
                );
            }
        }
        Ok(GDiffAxiomReport {
            degree_consistency,
            delta_squares,
            delta_lie,
            cartan_magic,
            lie_lie,
            lie_interior,
            interior_interior,
        })
    }

    /// Invariant forms on the circle with the circle acting on itself:
    /// basis `{1, e1}` with `i_{e_1}(e1) = 1` and everything else zero.
    pub fn circle_on_circle() -> Self {
        let mut interior: Mat<CRat> = Mat::zeros(2, 2);
        interior.set(0, 1, CRat::from_int(1));
        GDiffSpace {
            labels: vec!["1".into(), "e1".into()],
            degrees: vec![0, 1],
            algebra: LieAlgebraData::abelian(1),
            delta: Mat::zeros(2, 2),
            interior: vec![interior],
            lie: vec![Mat::zeros(2, 2)],
        }
    }

    /// The one-point space with a rank-`r` action.
    pub fn point(r: usize) -> Self {
        GDiffSpace {
            labels: vec!["1".into()],
            degrees: vec![0],
            algebra: LieAlgebraData::abelian(r),
            delta: Mat::zeros(1, 1),
            interior: vec![Mat::zeros(1, 1); r],
            lie: vec![Mat::zeros(1, 1); r],
        }
    }

    /// Forms on the circle with the trivial circle action (`i = L = 0`).
    pub fn circle_trivial_action() -> Self {
        GDiffSpace {
            labels: vec!["1".into(), "e1".into()],
            degrees: vec![0, 1],
            algebra: LieAlgebraData::abelian(1),
            delta: Mat::zeros(2, 2),
            interior: vec![Mat::zeros(2, 2)],
            lie: vec![Mat::zeros(2, 2)],
        }
    }
}

/// A monomial `theta^I F^J` of the Weil algebra: `I` as a bitmask, `J` as a
/// multidegree vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct WeilMonomial {
    theta: u32,
    f: Vec<u8>,
}

impl WeilMonomial {
    fn degree(&self) -> i64 {
        self.theta.count_ones() as i64 + 2 * self.f.iter().map(|&x| x as i64).sum::<i64>()
    }

    fn f_degree(&self) -> usize {
        self.f.iter().map(|&x| x as usize).sum()
    }
}

/// Sparse Weil-algebra element plus a flag recording whether part of it was
/// lost to the truncation.
#[derive(Clone, Debug, Default)]
struct WeilElement {
    terms: Vec<(usize, CRat)>, // (basis index, coefficient)
    overflowed: bool,
}

/// The Weil algebra truncated at symmetric degree `D` in the curvature
/// generators `F^i`.
#[derive(Clone, Debug)]
pub struct TruncatedWeil {
    pub algebra: LieAlgebraData,
    pub max_f_degree: usize,
    monomials: Vec<WeilMonomial>,
    index: BTreeMap<WeilMonomial, usize>,
}

impl TruncatedWeil {
    pub fn new(algebra: LieAlgebraData, max_f_degree: usize) -> Result<Self> {
        if max_f_degree == 0 {
            return Err(Error::input("Weil truncation degree must be at least 1"));
        }
        let r = algebra.rank();
        if r > 8 {
            return Err(Error::input("Weil algebra rank capped at 8"));
        }
        let mut monomials = Vec::new();
        let mut f_stack: Vec<Vec<u8>> = vec![vec![0; r]];
        // enumerate F multidegrees of total degree <= D
        fn extend(prefix: Vec<u8>, pos: usize, remaining: usize, out: &mut Vec<Vec<u8>>) {
            if pos == prefix.len() {
                out.push(prefix);
                return;
            }
            for take in 0..=remaining {
                let mut next = prefix.clone();
                next[pos] = take as u8;
                extend(next, pos + 1, remaining - take, out);
            }
        }
        if r > 0 {
            f_stack.clear();
            extend(vec![0; r], 0, max_f_degree, &mut f_stack);
        }
        for theta in 0..(1u32 << r) {
            for f in &f_stack {
                monomials.push(WeilMonomial {
                    theta,
                    f: f.clone(),
                });
            }
        }
        monomials.sort();
        let index = monomials
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Ok(TruncatedWeil {
            algebra,
            max_f_degree,
            monomials,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn unit_index(&self) -> usize {
        let unit = WeilMonomial {
            theta: 0,
            f: vec![0; self.algebra.rank()],
        };
        self.index[&unit]
    }

    pub fn monomial_degree(&self, idx: usize) -> i64 {
        self.monomials[idx].degree()
    }

    pub fn monomial_f_degree(&self, idx: usize) -> usize {
        self.monomials[idx].f_degree()
    }

    /// Indices of the horizontal (theta-free) monomials, which freely span
    /// the symmetric algebra on the curvature generators.
    pub fn horizontal_basis(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.monomials[i].theta == 0)
            .collect()
    }

    fn single(&self, m: WeilMonomial, c: CRat) -> WeilElement {
        match self.index.get(&m) {
            Some(&i) => WeilElement {
                terms: vec![(i, c)],
                overflowed: false,
            },
            None => WeilElement {
                terms: Vec::new(),
                overflowed: true,
            },
        }
    }

    /// Product of two monomials with Koszul reordering signs on the theta
    /// part; overflow when the F degree exceeds the truncation.
    fn mono_mul(&self, a: &WeilMonomial, b: &WeilMonomial) -> WeilElement {
        if a.theta & b.theta != 0 {
            return WeilElement::default();
        }
        // sign of interleaving sorted theta indices
        let mut sign = 0u32;
        for i in 0..32 {
            if b.theta >> i & 1 == 1 {
                sign += (a.theta >> (i + 1)).count_ones();
            }
        }
        let mut f = a.f.clone();
        for (x, y) in f.iter_mut().zip(&b.f) {
            *x += y;
        }
        let c = if sign % 2 == 0 {
            CRat::from_int(1)
        } else {
            CRat::from_int(-1)
        };
        self.single(
            WeilMonomial {
                theta: a.theta | b.theta,
                f,
            },
            c,
        )
    }

    fn add_into(acc: &mut WeilElement, e: WeilElement, scale: CRat) {
        acc.overflowed |= e.overflowed;
        for (i, c) in e.terms {
            let v = c.mul(&scale);
            match acc.terms.iter_mut().find(|(j, _)| *j == i) {
                Some((_, existing)) => *existing = existing.add(&v),
                None => acc.terms.push((i, v)),
            }
        }
    }

    /// Generator list of a monomial: thetas in ascending order, then Fs.
    fn factors(&self, m: &WeilMonomial) -> Vec<(Generator, i64)> {
        let mut out = Vec::new();
        for i in 0..self.algebra.rank() {
            if m.theta >> i & 1 == 1 {
                out.push((Generator::Theta(i), 1));
            }
        }
        for (i, &mult) in m.f.iter().enumerate() {
            for _ in 0..mult {
                out.push((Generator::F(i), 2));
            }
        }
        out
    }

    /// Extends a rule on generators to a (graded) derivation on the
    /// truncated algebra. `parity` is the degree parity of the derivation.
    fn derivation(
        &self,
        parity: i64,
        rule: impl Fn(Generator) -> Vec<(WeilMonomial, CRat)>,
    ) -> (Mat<CRat>, Vec<bool>) {
        let n = self.dim();
        let mut mat: Mat<CRat> = Mat::zeros(n, n);
        let mut overflow = vec![false; n];
        for (col, mono) in self.monomials.iter().enumerate() {
            let factors = self.factors(mono);
            let mut acc = WeilElement::default();
            let mut prefix_degree = 0i64;
            for (t, &(gen, gdeg)) in factors.iter().enumerate() {
                let sign = if parity % 2 != 0 && prefix_degree % 2 != 0 {
                    CRat::from_int(-1)
                } else {
                    CRat::from_int(1)
                };
                // prefix * rule(gen) * suffix
                for (m_out, c_out) in rule(gen) {
                    let mut piece = self.single(
                        WeilMonomial {
                            theta: 0,
                            f: vec![0; self.algebra.rank()],
                        },
                        CRat::from_int(1),
                    );
                    // multiply prefix factors
                    let mut parts: Vec<WeilMonomial> = Vec::new();
                    for &(g, _) in &factors[..t] {
                        parts.push(self.generator_monomial(g));
                    }
                    parts.push(m_out.clone());
                    for &(g, _) in &factors[t + 1..] {
                        parts.push(self.generator_monomial(g));
                    }
                    for p in parts {
                        let mut next = WeilElement::default();
                        next.overflowed = piece.overflowed;
                        for (i, c) in &piece.terms {
                            let prod = self.mono_mul(&self.monomials[*i], &p);
                            next.overflowed |= prod.overflowed;
                            for (j, pc) in prod.terms {
                                let v = pc.mul(c);
                                match next.terms.iter_mut().find(|(k, _)| *k == j) {
                                    Some((_, existing)) => *existing = existing.add(&v),
                                    None => next.terms.push((j, v)),
                                }
                            }
                        }
                        piece = next;
                    }
                    let scale = sign.mul(&c_out);
                    Self::add_into(&mut acc, piece, scale);
                }
                prefix_degree += gdeg;
            }
            overflow[col] = acc.overflowed;
            for (row, c) in acc.terms {
                if !c.is_zero() {
                    mat.set(row, col, mat.get(row, col).add(&c));
                }
            }
        }
        (mat, overflow)
    }

    fn generator_monomial(&self, g: Generator) -> WeilMonomial {
        let r = self.algebra.rank();
        match g {
            Generator::Theta(i) => WeilMonomial {
                theta: 1 << i,
                f: vec![0; r],
            },
            Generator::F(i) => {
                let mut f = vec![0; r];
                f[i] = 1;
                WeilMonomial { theta: 0, f }
            }
        }
    }

    /// `delta_W` with its per-column overflow flags.
    ///
    /// On generators: `delta_W(theta^i) = F^i - (1/2) c^i_{jk} theta^j theta^k`
    /// and `delta_W(F^i) = c^i_{jk} F^j theta^k`.
    pub fn delta_w(&self) -> (Mat<CRat>, Vec<bool>) {
        let r = self.algebra.rank();
        self.derivation(1, |g| {
            let mut out = Vec::new();
            match g {
                Generator::Theta(i) => {
                    let mut f = vec![0u8; r];
                    f[i] = 1;
                    out.push((WeilMonomial { theta: 0, f }, CRat::from_int(1)));
                    for j in 0..r {
                        for k in 0..r {
                            let c = self.algebra.structure_constant(i, j, k);
                            if !c.is_zero() && j != k {
                                out.push((
                                    WeilMonomial {
                                        theta: (1 << j) | (1 << k),
                                        f: vec![0; r],
                                    },
                                    // theta^j theta^k with j>k picks up the
                                    // reordering sign through mono_mul; emit
                                    // ordered monomials directly instead.
                                    CRat::from_rational(
                                        -c * Rational64::new(1, 2)
                                            * if j < k {
                                                Rational64::from_integer(1)
                                            } else {
                                                Rational64::from_integer(-1)
                                            },
                                    ),
                                ));
                            }
                        }
                    }
                }
                Generator::F(i) => {
                    for j in 0..r {
                        for k in 0..r {
                            let c = self.algebra.structure_constant(i, j, k);
                            if !c.is_zero() {
                                let mut f = vec![0u8; r];
                                f[j] = 1;
                                out.push((
                                    WeilMonomial {
                                        theta: 1 << k,
                                        f,
                                    },
                                    CRat::from_rational(c),
                                ));
                            }
                        }
                    }
                }
            }
            out
        })
    }

    /// Interior product `i_{e_j}` (odd derivation).
    pub fn interior(&self, j: usize) -> Mat<CRat> {
        let r = self.algebra.rank();
        self.derivation(1, |g| match g {
            Generator::Theta(i) if i == j => vec![(
                WeilMonomial {
                    theta: 0,
                    f: vec![0; r],
                },
                CRat::from_int(1),
            )],
            _ => Vec::new(),
        })
        .0
    }

    /// Lie derivative `L_{e_j}` (even derivation).
    pub fn lie(&self, j: usize) -> Mat<CRat> {
        let r = self.algebra.rank();
        self.derivation(0, |g| {
            let mut out = Vec::new();
            match g {
                Generator::Theta(i) => {
                    for k in 0..r {
                        let c = self.algebra.structure_constant(i, j, k);
                        if !c.is_zero() {
                            out.push((
                                WeilMonomial {
                                    theta: 1 << k,
                                    f: vec![0; r],
                                },
                                CRat::from_rational(-c),
                            ));
                        }
                    }
                }
                Generator::F(i) => {
                    for k in 0..r {
                        let c = self.algebra.structure_constant(i, j, k);
                        if !c.is_zero() {
                            let mut f = vec![0u8; r];
                            f[k] = 1;
                            out.push((WeilMonomial { theta: 0, f }, CRat::from_rational(-c)));
                        }
                    }
                }
            }
            out
        })
        .0
    }

    /// Left multiplication by `theta^j`.
    pub fn mul_theta(&self, j: usize) -> (Mat<CRat>, Vec<bool>) {
        self.mul_by(&self.generator_monomial(Generator::Theta(j)))
    }

    /// Left multiplication by `F^i`.
    pub fn mul_f(&self, i: usize) -> (Mat<CRat>, Vec<bool>) {
        self.mul_by(&self.generator_monomial(Generator::F(i)))
    }

    fn mul_by(&self, m: &WeilMonomial) -> (Mat<CRat>, Vec<bool>) {
        let n = self.dim();
        let mut mat: Mat<CRat> = Mat::zeros(n, n);
        let mut overflow = vec![false; n];
        for col in 0..n {
            let prod = self.mono_mul(m, &self.monomials[col]);
            overflow[col] = prod.overflowed;
            for (row, c) in prod.terms {
                mat.set(row, col, c);
            }
        }
        (mat, overflow)
    }
}

#[derive(Clone, Copy, Debug)]
enum Generator {
    Theta(usize),
    F(usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelKind {
    Weil,
    Cartan,
}

/// A Weil or Cartan model: a basis of the model subspace expressed in the
/// ambient tensor product, the restricted differential, and per-degree
/// truncation-safety flags.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    pub model: ModelKind,
    /// Degrees of the model basis vectors.
    pub degrees: Vec<i64>,
    /// F-degree of each model basis vector (well defined for both models).
    pub f_degrees: Vec<usize>,
    /// Model basis vectors in ambient coordinates.
    pub basis: Vec<Vec<CRat>>,
    /// Differential in model coordinates.
    pub differential: Mat<CRat>,
    /// Basis vectors whose differential was corrupted by the truncation.
    pub unsafe_vectors: Vec<bool>,
    /// Largest degree for which cohomology may be reported.
    pub safe_degree_cap: i64,
}

impl EquivariantComplex {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Dimensions per degree of the model itself (not its cohomology).
    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }

    fn degree_block(&self, from_degree: i64) -> Mat<CRat> {
        let cols: Vec<usize> = (0..self.dim())
            .filter(|&i| self.degrees[i] == from_degree)
            .collect();
        let rows: Vec<usize> = (0..self.dim())
            .filter(|&i| self.degrees[i] == from_degree + 1)
            .collect();
        let mut block: Mat<CRat> = Mat::zeros(rows.len(), cols.len());
        for (bj, &j) in cols.iter().enumerate() {
            for (bi, &i) in rows.iter().enumerate() {
                block.set(bi, bj, *self.differential.get(i, j));
            }
        }
        block
    }

    fn degree_is_safe(&self, d: i64) -> bool {
        if d > self.safe_degree_cap {
            return false;
        }
        (0..self.dim())
            .filter(|&i| self.degrees[i] == d || self.degrees[i] == d - 1)
            .all(|i| !self.unsafe_vectors[i])
    }

    /// `dim ker - dim im` at one degree; errors when the truncation is too
    /// small for that degree.
    pub fn cohomology_at(&self, d: i64) -> Result<usize> {
        if !self.degree_is_safe(d) {
            return Err(Error::input(format!(
                "degree {d} is outside the truncation-safe range: increase D"
            )));
        }
        let out_block = self.degree_block(d);
        let in_block = self.degree_block(d - 1);
        let dim_d = out_block.cols;
        let kernel = dim_d - out_block.rank();
        Ok(kernel - in_block.rank())
    }

    /// Cohomology dimensions for all safe degrees `0..=cap`.
    pub fn cohomology(&self) -> Vec<(i64, usize)> {
        (0..=self.safe_degree_cap)
            .filter_map(|d| self.cohomology_at(d).ok().map(|h| (d, h)))
            .collect()
    }

    /// Residual of the differential squaring to zero on safe vectors.
    pub fn d_squared_residual(&self) -> f64 {
        let dd = self.differential.matmul(&self.differential);
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            if self.unsafe_vectors[j] || self.degrees[j] + 2 > self.safe_degree_cap + 1 {
                continue;
            }
            // skip columns whose image lands on unsafe vectors
            let image_unsafe = (0..self.dim()).any(|i| {
                self.unsafe_vectors[i] && !self.differential.get(i, j).is_zero()
            });
            if image_unsafe {
                continue;
            }
            for i in 0..self.dim() {
                worst = worst.max(dd.get(i, j).residual_norm());
            }
        }
        worst
    }
}

/// The ambient complex `M (x) Wg` with its total operators and overflow
/// bookkeeping; both models and the Mathai-Quillen morphism live here.
pub struct AmbientComplex {
    pub space: GDiffSpace,
    pub weil: TruncatedWeil,
    pub dim: usize,
    /// degree of each ambient pair basis vector
    pub degrees: Vec<i64>,
    pub f_degrees: Vec<usize>,
    delta_total: Mat<CRat>,
    delta_overflow: Vec<bool>,
    interior_total: Vec<Mat<CRat>>,
    lie_total: Vec<Mat<CRat>>,
    /// Cartan-style differential extended to the whole ambient space:
    /// `delta (x) 1 - sum_i i_{e_i} (x) (F^i .)`.
    cartan_total: Mat<CRat>,
    cartan_overflow: Vec<bool>,
}

impl AmbientComplex {
    pub fn new(space: GDiffSpace, max_f_degree: usize) -> Result<Self> {
        let report = space.check_gdiff_axioms()?;
        if !report.pass() {
            return Err(Error::hypothesis(format!(
                "input space fails the g-differential axioms (max residual {:e})",
                report.max_residual()
            )));
        }
        let weil = TruncatedWeil::new(space.algebra.clone(), max_f_degree)?;
        let nm = space.dim();
        let nw = weil.dim();
        let dim = nm * nw;
        // pair index: a * nw + b for (m_a, w_b)
        let mut degrees = Vec::with_capacity(dim);
        let mut f_degrees = Vec::with_capacity(dim);
        for a in 0..nm {
            for b in 0..nw {
                degrees.push(space.degrees[a] + weil.monomial_degree(b));
                f_degrees.push(weil.monomial_f_degree(b));
            }
        }
        let (dw, dw_over) = weil.delta_w();
        let mut delta_total: Mat<CRat> = Mat::zeros(dim, dim);
        let mut delta_overflow = vec![false; dim];
        let mut cartan_total: Mat<CRat> = Mat::zeros(dim, dim);
        let mut cartan_overflow = vec![false; dim];
        // delta (x) 1
        for a_to in 0..nm {
            for a_from in 0..nm {
                let c = space.delta.get(a_to, a_from);
                if c.is_zero() {
                    continue;
                }
                for b in 0..nw {
                    let to = a_to * nw + b;
                    let from = a_from * nw + b;
                    delta_total.set(to, from, delta_total.get(to, from).add(c));
                    cartan_total.set(to, from, cartan_total.get(to, from).add(c));
                }
            }
        }
        // (-1)^{|x|} 1 (x) delta_W
        for a in 0..nm {
            let sign = if space.degrees[a] % 2 != 0 {
                CRat::from_int(-1)
            } else {
                CRat::from_int(1)
            };
            for b_from in 0..nw {
                if dw_over[b_from] {
                    delta_overflow[a * nw + b_from] = true;
                }
                for b_to in 0..nw {
                    let c = dw.get(b_to, b_from);
                    if c.is_zero() {
                        continue;
                    }
                    let to = a * nw + b_to;
                    let from = a * nw + b_from;
                    delta_total.set(to, from, delta_total.get(to, from).add(&c.mul(&sign)));
                }
            }
        }
        // - sum_i i_{e_i} (x) (F^i .)
        let r = space.rank();
        for i in 0..r {
            let (mf, mf_over) = weil.mul_f(i);
            for a_to in 0..nm {
                for a_from in 0..nm {
                    let c = space.interior[i].get(a_to, a_from);
                    if c.is_zero() {
                        continue;
                    }
                    for b_from in 0..nw {
                        if mf_over[b_from] {
                            cartan_overflow[a_from * nw + b_from] = true;
                        }
                        for b_to in 0..nw {
                            let w = mf.get(b_to, b_from);
                            if w.is_zero() {
                                continue;
                            }
                            let to = a_to * nw + b_to;
                            let from = a_from * nw + b_from;
                            let v = cartan_total.get(to, from).sub(&c.mul(w));
                            cartan_total.set(to, from, v);
                        }
                    }
                }
            }
        }
        // total interior and Lie operators
        let mut interior_total = Vec::with_capacity(r);
        let mut lie_total = Vec::with_capacity(r);
        for i in 0..r {
            let wi = weil.interior(i);
            let wl = weil.lie(i);
            let mut it: Mat<CRat> = Mat::zeros(dim, dim);
            let mut lt: Mat<CRat> = Mat::zeros(dim, dim);
            for a_to in 0..nm {
                for a_from in 0..nm {
                    let ci = space.interior[i].get(a_to, a_from);
                    let cl = space.lie[i].get(a_to, a_from);
                    for b in 0..nw {
                        if !ci.is_zero() {
                            let v = it.get(a_to * nw + b, a_from * nw + b).add(ci);
                            it.set(a_to * nw + b, a_from * nw + b, v);
                        }
                        if !cl.is_zero() {
                            let v = lt.get(a_to * nw + b, a_from * nw + b).add(cl);
                            lt.set(a_to * nw + b, a_from * nw + b, v);
                        }
                    }
                }
            }
            for a in 0..nm {
                let sign = if space.degrees[a] % 2 != 0 {
                    CRat::from_int(-1)
                } else {
                    CRat::from_int(1)
                };
                for b_from in 0..nw {
                    for b_to in 0..nw {
                        let wi_c = wi.get(b_to, b_from);
                        if !wi_c.is_zero() {
                            let to = a * nw + b_to;
                            let from = a * nw + b_from;
                            let v = it.get(to, from).add(&wi_c.mul(&sign));
                            it.set(to, from, v);
                        }
                        let wl_c = wl.get(b_to, b_from);
                        if !wl_c.is_zero() {
                            let to = a * nw + b_to;
                            let from = a * nw + b_from;
                            let v = lt.get(to, from).add(wl_c);
                            lt.set(to, from, v);
                        }
                    }
                }
            }
            interior_total.push(it);
            lie_total.push(lt);
        }
        Ok(AmbientComplex {
            space,
            weil,
            dim,
            degrees,
            f_degrees,
            delta_total,
            delta_overflow,
            interior_total,
            lie_total,
            cartan_total,
            cartan_overflow,
        })
    }

    /// The Mathai-Quillen morphism `phi = exp(gamma)` with
    /// `gamma(x (x) w) = (-1)^{|x|'} (i_{e_j} x) (x) (theta^j w)`.
    ///
    /// Gamma is nilpotent, so the exponential is a finite sum with exact
    /// rational coefficients.
    pub fn mathai_quillen(&self) -> Mat<CRat> {
        let nm = self.space.dim();
        let nw = self.weil.dim();
        let mut gamma: Mat<CRat> = Mat::zeros(self.dim, self.dim);
        for j in 0..self.space.rank() {
            let (mt, _) = self.weil.mul_theta(j);
            for a_to in 0..nm {
                for a_from in 0..nm {
                    let c = self.space.interior[j].get(a_to, a_from);
                    if c.is_zero() {
                        continue;
                    }
                    // (-1)^{|x|'} with |x| the degree of the source in M
                    let sign = if (self.space.degrees[a_from] - 1).rem_euclid(2) == 1 {
                        CRat::from_int(-1)
                    } else {
                        CRat::from_int(1)
                    };
                    for b_from in 0..nw {
                        for b_to in 0..nw {
                            let w = mt.get(b_to, b_from);
                            if w.is_zero() {
                                continue;
                            }
                            let to = a_to * nw + b_to;
                            let from = a_from * nw + b_from;
                            let v = gamma.get(to, from).add(&c.mul(&sign).mul(w));
                            gamma.set(to, from, v);
                        }
                    }
                }
            }
        }
        // exp of a nilpotent matrix
        let mut phi: Mat<CRat> = Mat::identity(self.dim);
        let mut power = Mat::identity(self.dim);
        let mut factorial = Rational64::from_integer(1);
        for k in 1..=(self.space.rank() + 1) {
            power = gamma.matmul(&power);
            if power.is_zero() {
                break;
            }
            factorial *= Rational64::from_integer(k as i64);
            phi = phi.add(&power.scale(&CRat::from_rational(factorial.recip())));
        }
        phi
    }

    fn invariant_kernel(&self, columns: &[usize]) -> Vec<Vec<CRat>> {
        // rows: stacked L (and optionally i) restricted to the span of
        // `columns`; kernel in those coordinates.
        let mats: Vec<&Mat<CRat>> = self.lie_total.iter().collect();
        self.restricted_kernel(&mats, columns)
    }

    fn restricted_kernel(&self, ops: &[&Mat<CRat>], columns: &[usize]) -> Vec<Vec<CRat>> {
        let k = columns.len();
        let mut stacked: Mat<CRat> = Mat::zeros(ops.len() * self.dim, k);
        for (oi, op) in ops.iter().enumerate() {
            for (cj, &col) in columns.iter().enumerate() {
                for row in 0..self.dim {
                    let v = op.get(row, col);
                    if !v.is_zero() {
                        stacked.set(oi * self.dim + row, cj, *v);
                    }
                }
            }
        }
        stacked.kernel_basis()
    }

    /// Builds the Weil or Cartan model by exact kernel intersection.
    pub fn build_model(&self, model: ModelKind) -> Result<EquivariantComplex> {
        let (columns, differential, overflow): (Vec<usize>, &Mat<CRat>, &Vec<bool>) = match model {
            ModelKind::Weil => (
                (0..self.dim).collect(),
                &self.delta_total,
                &self.delta_overflow,
            ),
            ModelKind::Cartan => {
                // ambient restricted to theta-free monomials
                let nw = self.weil.dim();
                let hor = self.weil.horizontal_basis();
                let cols = (0..self.space.dim())
                    .flat_map(|a| hor.iter().map(move |&b| a * nw + b))
                    .collect();
                (cols, &self.cartan_total, &self.cartan_overflow)
            }
        };
        // subspace: ker L (both models) and additionally ker i (Weil/basic)
        let kernel_coords = match model {
            ModelKind::Weil => {
                let mut ops: Vec<&Mat<CRat>> = self.lie_total.iter().collect();
                ops.extend(self.interior_total.iter());
                self.restricted_kernel(&ops, &columns)
            }
            ModelKind::Cartan => self.invariant_kernel(&columns),
        };
        // expand to ambient coordinates
        let mut basis: Vec<Vec<CRat>> = Vec::with_capacity(kernel_coords.len());
        for v in &kernel_coords {
            let mut amb = vec![CRat::zero(); self.dim];
            for (cj, &col) in columns.iter().enumerate() {
                amb[col] = v[cj];
            }
            basis.push(amb);
        }
        // degrees must be homogeneous per basis vector; the kernel of graded
        // operators splits by degree, so resolve by splitting each vector.
        let mut graded_basis: Vec<Vec<CRat>> = Vec::new();
        for v in basis {
            let mut by_degree: BTreeMap<i64, Vec<CRat>> = BTreeMap::new();
            for (idx, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    by_degree
                        .entry(self.degrees[idx])
                        .or_insert_with(|| vec![CRat::zero(); self.dim])[idx] = *c;
                }
            }
            for (_, part) in by_degree {
                graded_basis.push(part);
            }
        }
        // dedupe linear dependencies introduced by the split
        let mut independent: Vec<Vec<CRat>> = Vec::new();
        for v in graded_basis {
            let mut trial = independent.clone();
            trial.push(v.clone());
            if Mat::span_dim(&trial) > independent.len() {
                independent.push(v);
            }
        }
        let basis = independent;
        let degrees: Vec<i64> = basis
            .iter()
            .map(|v| {
                self.degrees[v
                    .iter()
                    .position(|c| !c.is_zero())
                    .expect("basis vector is nonzero")]
            })
            .collect();
        let f_degrees: Vec<usize> = basis
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, _)| self.f_degrees[i])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        // restrict the differential: solve for coordinates in the basis
        let n = basis.len();
        let mut differential_model: Mat<CRat> = Mat::zeros(n, n);
        let mut unsafe_vectors = vec![false; n];
        // matrix with basis vectors as columns for solving
        for (j, v) in basis.iter().enumerate() {
            let image = differential.apply(v);
            let touched_overflow = v
                .iter()
                .enumerate()
                .any(|(idx, c)| !c.is_zero() && overflow[idx]);
            if touched_overflow {
                unsafe_vectors[j] = true;
            }
            // express image in basis by least squares-free exact solve:
            // [basis columns | image] row reduction
            let mut aug: Mat<CRat> = Mat::zeros(self.dim, n + 1);
            for (bj, bv) in basis.iter().enumerate() {
                for (i, c) in bv.iter().enumerate() {
                    if !c.is_zero() {
                        aug.set(i, bj, *c);
                    }
                }
            }
            for (i, c) in image.iter().enumerate() {
                if !c.is_zero() {
                    aug.set(i, n, *c);
                }
            }
            let (_, pivots) = aug.row_echelon();
            if pivots.contains(&n) {
                // image not in the span: truncation artifact
                unsafe_vectors[j] = true;
                continue;
            }
            // read off coefficients: for each pivot column bj at row rj
            for (r_idx, &pc) in pivots.iter().enumerate() {
                if pc < n {
                    let coeff = *aug.get(r_idx, n);
                    differential_model.set(pc, j, coeff);
                }
            }
        }
        let safe_degree_cap = 2 * self.weil.max_f_degree as i64 - 1;
        Ok(EquivariantComplex {
            model,
            degrees,
            f_degrees,
            basis,
            differential: differential_model,
            unsafe_vectors,
            safe_degree_cap,
        })
    }

    /// Residual of `delta_Car . phi - phi . delta_W` on the Weil model
    /// basis, restricted to vectors the truncation cannot corrupt.
    pub fn mathai_quillen_intertwining_residual(&self, weil_model: &EquivariantComplex) -> f64 {
        let phi = self.mathai_quillen();
        let mut worst = 0.0f64;
        for (j, v) in weil_model.basis.iter().enumerate() {
            if weil_model.unsafe_vectors[j] {
                continue;
            }
            // guard: phi(v) and delta paths must stay clear of overflow
            let touched = v
                .iter()
                .enumerate()
                .any(|(idx, c)| !c.is_zero() && (self.delta_overflow[idx] || self.cartan_overflow[idx]));
            if touched || weil_model.degrees[j] + 1 > weil_model.safe_degree_cap {
                continue;
            }
            let lhs = self.cartan_total.apply(&phi.apply(v));
            let rhs = phi.apply(&self.delta_total.apply(v));
            for (a, b) in lhs.iter().zip(rhs.iter()) {
                worst = worst.max(a.sub(b).residual_norm());
            }
        }
        worst
    }

    /// Checks that `phi` maps the Weil model into the Cartan model: the
    /// image must be theta-free and g-invariant.
    pub fn mathai_quillen_image_in_cartan(&self, weil_model: &EquivariantComplex) -> bool {
        let phi = self.mathai_quillen();
        let nw = self.weil.dim();
        let hor: std::collections::BTreeSet<usize> =
            self.weil.horizontal_basis().into_iter().collect();
        for (j, v) in weil_model.basis.iter().enumerate() {
            if weil_model.unsafe_vectors[j] {
                continue;
            }
            let img = phi.apply(v);
            for (idx, c) in img.iter().enumerate() {
                if !c.is_zero() && !hor.contains(&(idx % nw)) {
                    return false;
                }
            }
            for l in &self.lie_total {
                if l.apply(&img).iter().any(|c| !c.is_zero()) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_on_circle_passes_axioms() {
        // direct 2x2 matrix check
        let m = GDiffSpace::circle_on_circle();
        let report = m.check_gdiff_axioms().unwrap();
        assert!(report.pass(), "{report:?}");
    }

    #[test]
    fn point_passes_axioms() {
        let m = GDiffSpace::point(1);
        assert!(m.check_gdiff_axioms().unwrap().pass());
    }

    #[test]
    fn mutated_space_fails() {
        // i_{e_1}(1) = e1 violates the grading (degree -1 operator raising
        // degree) and the ii + ii = 0 axiom.
        let mut m = GDiffSpace::circle_on_circle();
        m.interior[0].set(1, 0, CRat::from_int(1));
        let report = m.check_gdiff_axioms().unwrap();
        assert!(!report.pass());
        assert!(report.degree_consistency > 0.0 || report.interior_interior > 0.0);
    }

    #[test]
    fn weil_abelian_rank1_basis() {
        // abelian r=1, D=2: basis {1, theta, F, theta F, F^2}, delta_W theta = F
        let w = TruncatedWeil::new(LieAlgebraData::abelian(1), 2).unwrap();
        assert_eq!(w.dim(), 6); // theta in {0,1} x F-degree in {0,1,2}
        let hor = w.horizontal_basis();
        assert_eq!(hor.len(), 3); // {1, F, F^2}
        let (dw, _) = w.delta_w();
        // delta_W(theta) = F: find indices
        let theta_idx = (0..w.dim())
            .find(|&i| w.monomials[i].theta == 1 && w.monomial_f_degree(i) == 0)
            .unwrap();
        let f_idx = (0..w.dim())
            .find(|&i| w.monomials[i].theta == 0 && w.monomials[i].f == vec![1])
            .unwrap();
        assert_eq!(*dw.get(f_idx, theta_idx), CRat::from_int(1));
        // delta_W^2 = 0 exactly for abelian (no overflow from theta count)
        let dd = dw.matmul(&dw);
        for col in 0..w.dim() {
            if w.monomial_f_degree(col) + 1 <= 2 {
                for row in 0..w.dim() {
                    assert!(dd.get(row, col).is_zero());
                }
            }
        }
    }

    #[test]
    fn weil_so3_curvature_relation() {
        // delta_W(F^i) = sum c^i_{jk} F^j theta^k as a matrix identity
        let w = TruncatedWeil::new(LieAlgebraData::so3(), 2).unwrap();
        let (dw, _) = w.delta_w();
        // check on the generator F^0: delta_W(F^0) = F^1 theta^2 - F^2 theta^1
        let f0 = (0..w.dim())
            .find(|&i| w.monomials[i].theta == 0 && w.monomials[i].f == vec![1, 0, 0])
            .unwrap();
        let f1t2 = (0..w.dim())
            .find(|&i| w.monomials[i].theta == 0b100 && w.monomials[i].f == vec![0, 1, 0])
            .unwrap();
        let f2t1 = (0..w.dim())
            .find(|&i| w.monomials[i].theta == 0b010 && w.monomials[i].f == vec![0, 0, 1])
            .unwrap();
        assert_eq!(*dw.get(f1t2, f0), CRat::from_int(1));
        assert_eq!(*dw.get(f2t1, f0), CRat::from_int(-1));
        // delta_W^2 = 0 on the truncation-safe columns (F-degree <= D - 2
        // keeps both applications representable)
        let dd = dw.matmul(&dw);
        for col in 0..w.dim() {
            if w.monomial_f_degree(col) == 0 {
                for row in 0..w.dim() {
                    assert!(
                        dd.get(row, col).is_zero(),
                        "delta_W^2 nonzero at ({row},{col})"
                    );
                }
            }
        }
    }

    #[test]
    fn cartan_model_circle_on_circle() {
        // basis {1 (x) F^k, e1 (x) F^k}, delta_Car(e1 (x) F^k) = -1 (x) F^{k+1}
        let ambient = AmbientComplex::new(GDiffSpace::circle_on_circle(), 3).unwrap();
        let cartan = ambient.build_model(ModelKind::Cartan).unwrap();
        assert_eq!(cartan.dim(), 8); // {1, e1} x {1, F, F^2, F^3}
        // check the differential structure: degree 2k+1 -> one dimension to 2k+2
        for (j, &d) in cartan.degrees.iter().enumerate() {
            let col: Vec<CRat> = (0..cartan.dim())
                .map(|i| *cartan.differential.get(i, j))
                .collect();
            let nonzero = col.iter().filter(|c| !c.is_zero()).count();
            if d % 2 == 1 && !cartan.unsafe_vectors[j] {
                assert_eq!(nonzero, 1, "odd degree {d} must map onto F^{{k+1}}");
            }
            if d % 2 == 0 {
                assert_eq!(nonzero, 0, "even degree {d} must be closed");
            }
        }
        // cohomology: C in degree 0, zero in 1..=2D-1
        assert_eq!(cartan.cohomology_at(0).unwrap(), 1);
        for d in 1..=cartan.safe_degree_cap {
            assert_eq!(cartan.cohomology_at(d).unwrap(), 0, "degree {d}");
        }
    }

    #[test]
    fn cartan_model_point() {
        // C[F] with zero differential: dims 1,0,1,0,...
        let ambient = AmbientComplex::new(GDiffSpace::point(1), 3).unwrap();
        let cartan = ambient.build_model(ModelKind::Cartan).unwrap();
        assert!(cartan.differential.is_zero());
        let dims = cartan.cohomology();
        for (d, h) in dims {
            assert_eq!(h, usize::from(d % 2 == 0), "degree {d}");
        }
    }

    #[test]
    fn trivial_action_gives_kuenneth_dims() {
        // H(S^1) (x) C[F]: dims 1,1,1,1,...
        let ambient = AmbientComplex::new(GDiffSpace::circle_trivial_action(), 3).unwrap();
        let cartan = ambient.build_model(ModelKind::Cartan).unwrap();
        for (d, h) in cartan.cohomology() {
            assert_eq!(h, 1, "degree {d}");
        }
    }

    #[test]
    fn weil_and_cartan_dims_agree() {
        // basic subspace dimension equals Cartan model dimension per degree
        let ambient = AmbientComplex::new(GDiffSpace::circle_on_circle(), 2).unwrap();
        let weil = ambient.build_model(ModelKind::Weil).unwrap();
        let cartan = ambient.build_model(ModelKind::Cartan).unwrap();
        let wd = weil.dims_by_degree();
        let cd = cartan.dims_by_degree();
        for d in 0..=(2 * 2 - 1) {
            assert_eq!(wd.get(&d), cd.get(&d), "degree {d}");
        }
    }

    #[test]
    fn weil_and_cartan_cohomology_agree() {
        let ambient = AmbientComplex::new(GDiffSpace::circle_on_circle(), 3).unwrap();
        let weil = ambient.build_model(ModelKind::Weil).unwrap();
        let cartan = ambient.build_model(ModelKind::Cartan).unwrap();
        for d in 0..=4 {
            assert_eq!(
                weil.cohomology_at(d).ok(),
                cartan.cohomology_at(d).ok(),
                "degree {d}"
            );
        }
    }

    #[test]
    fn mathai_quillen_point_is_identity() {
        let ambient = AmbientComplex::new(GDiffSpace::point(1), 2).unwrap();
        let phi = ambient.mathai_quillen();
        assert_eq!(phi, Mat::identity(ambient.dim));
    }

    #[test]
    fn mathai_quillen_intertwines() {
        let ambient = AmbientComplex::new(GDiffSpace::circle_on_circle(), 3).unwrap();
        let weil = ambient.build_model(ModelKind::Weil).unwrap();
        assert!(ambient.mathai_quillen_image_in_cartan(&weil));
        let residual = ambient.mathai_quillen_intertwining_residual(&weil);
        assert_eq!(residual, 0.0);
    }

    #[test]
    fn gamma_nilpotency_rank_one() {
        // gamma^2 = 0 when g has rank one
        let ambient = AmbientComplex::new(GDiffSpace::circle_on_circle(), 2).unwrap();
        let phi = ambient.mathai_quillen();
        let gamma = phi.sub(&Mat::identity(ambient.dim));
        assert!(gamma.matmul(&gamma).is_zero());
    }

    #[test]
    fn cohomology_requesting_unsafe_degree_errors() {
        let ambient = AmbientComplex::new(GDiffSpace::circle_on_circle(), 2).unwrap();
        let cartan = ambient.build_model(ModelKind::Cartan).unwrap();
        assert!(cartan.cohomology_at(2 * 2).is_err());
    }

    #[test]
    fn so3_structure_constants_validate() {
        assert!(LieAlgebraData::so3().validate().is_ok());
        assert!(!LieAlgebraData::so3().is_abelian());
        assert!(LieAlgebraData::abelian(2).is_abelian());
    }
}
