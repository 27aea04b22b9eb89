use rand::Rng;

use super::field::PrimeField;
use super::matrix::Matrix;
use crate::error::{Error, Result};
use crate::schubert::SchubertIndex;

/// A complete flag `E_1 ⊂ ... ⊂ E_m`, with `E_a` spanned by the first `a`
/// columns of an invertible matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagBasis {
    basis: Matrix,
    inverse: Matrix,
}

impl FlagBasis {
    pub fn new(basis: Matrix) -> Result<Self> {
        if basis.rows() != basis.cols() {
            return Err(Error::ShapeMismatch(format!(
                "flag basis must be square, got {}x{}",
                basis.rows(),
                basis.cols()
            )));
        }
        let inverse = basis
            .inverse()
            .ok_or_else(|| Error::ShapeMismatch("flag basis is singular".into()))?;
        Ok(Self { basis, inverse })
    }

    pub fn standard(field: PrimeField, m: usize) -> Self {
        let id = Matrix::identity(field, m);
        Self {
            basis: id.clone(),
            inverse: id,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    /// `E_a` for `0 <= a <= m`.
    pub fn subspace(&self, a: usize) -> Subspace {
        Subspace {
            basis: self.basis.leading_columns(a),
        }
    }

    /// Whether `v` lies in `E_a`: its last `m - a` flag coordinates vanish.
    pub fn level_contains(&self, a: usize, v: &[u64]) -> bool {
        let coords = self.inverse.mul_vec(v);
        coords[a..].iter().all(|&x| x == 0)
    }

    /// The same flag after applying `g` to the ambient space.
    pub fn transform(&self, g: &Matrix) -> Result<Self> {
        Self::new(g.mul(&self.basis))
    }
}

/// A uniformly random complete flag: a random invertible matrix, drawn by
/// rejection.
pub fn random_flag<R: Rng + ?Sized>(m: usize, field: PrimeField, rng: &mut R) -> FlagBasis {
    loop {
        let b = Matrix::random(field, m, m, rng);
        if let Ok(flag) = FlagBasis::new(b) {
            return flag;
        }
    }
}

/// A linear subspace given by a basis (full column rank matrix).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    pub fn new(basis: Matrix) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::ShapeMismatch(format!(
                "{} spanning vectors have rank {}",
                basis.cols(),
                basis.rank()
            )));
        }
        Ok(Self { basis })
    }

    /// The span of arbitrary columns; a basis is extracted.
    pub fn span(generators: &Matrix) -> Self {
        let pivots = generators.rref().pivots;
        // pivots of the row-reduced matrix are the independent columns
        Self {
            basis: generators.select_columns(&pivots),
        }
    }

    pub fn zero(field: PrimeField, m: usize) -> Self {
        Self {
            basis: Matrix::zeros(field, m, 0),
        }
    }

    pub fn whole(field: PrimeField, m: usize) -> Self {
        Self {
            basis: Matrix::identity(field, m),
        }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, m: usize, d: usize, rng: &mut R) -> Self {
        assert!(d <= m);
        loop {
            let b = Matrix::random(field, m, d, rng);
            if b.rank() == d {
                return Self { basis: b };
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[u64]) -> bool {
        let col = Matrix::from_columns(self.basis.field(), v.len(), &[v.to_vec()]);
        self.basis.hcat(&col).rank() == self.dim()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.basis.hcat(&other.basis).rank() == self.dim()
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains(other)
    }

    /// Basis of `self ∩ other`, expressed as coefficient vectors over the
    /// basis of `self` (a `dim(self) x k` matrix).
    pub fn intersection_coords(&self, other: &Subspace) -> Matrix {
        let d = self.dim();
        let ns = self.basis.hcat(&other.basis).nullspace();
        let rows: Vec<usize> = (0..d).collect();
        // independent because `other`'s basis is
        ns.select_rows(&rows)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        Subspace {
            basis: self.basis.mul(&self.intersection_coords(other)),
        }
    }

    /// Image of a subspace of coordinate space `F^k` under `self`'s basis,
    /// i.e. a subspace of `self` given in coordinates.
    pub fn embed(&self, inner: &Subspace) -> Subspace {
        Subspace {
            basis: self.basis.mul(&inner.basis),
        }
    }
}

/// Position of a subspace relative to a flag, with an adapted basis.
#[derive(Clone, Debug)]
pub struct Position {
    pub index: SchubertIndex,
    /// Columns `u_1, ..., u_d` with `E_{i_a} ∩ S = span(u_1, ..., u_a)`, in
    /// ambient coordinates.
    pub adapted: Matrix,
    /// Coefficients of `adapted` over the basis of `S`.
    pub transform: Matrix,
}

/// The unique `I` with `S` in the open Schubert cell of `I` for the flag `E`.
///
/// Works in flag coordinates and eliminates bottom-up: each basis vector is
/// reduced so that its lowest nonzero coordinate is distinct, and those rows
/// are the jumps of `a -> dim(S ∩ E_a)`.
pub fn schubert_position(s: &Subspace, e: &FlagBasis) -> Position {
    let f = e.field();
    let m = e.dim();
    let d = s.dim();
    assert_eq!(
        s.ambient_dim(),
        m,
        "subspace and flag live in different spaces"
    );
    let mut c = e.inverse().mul(s.basis());
    // transform tracks the column operations applied to the basis of S
    let mut t = Matrix::identity(f, d);
    let mut pivot_of = vec![usize::MAX; d];
    let mut unused: Vec<usize> = (0..d).collect();
    for k in (0..m).rev() {
        let Some(pos) = unused.iter().position(|&col| c.get(k, col) != 0) else {
            continue;
        };
        let col = unused.remove(pos);
        pivot_of[col] = k;
        let inv = f.inv(c.get(k, col));
        scale_col(&mut c, col, inv);
        scale_col(&mut t, col, inv);
        for &other in &unused {
            let factor = c.get(k, other);
            if factor != 0 {
                axpy_col(&mut c, other, col, f.neg(factor));
                axpy_col(&mut t, other, col, f.neg(factor));
            }
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&col| pivot_of[col]);
    let elems = order.iter().map(|&col| pivot_of[col] + 1).collect();
    let transform = t.select_columns(&order);
    Position {
        index: SchubertIndex::new(m, elems).expect("pivot rows are distinct"),
        adapted: s.basis().mul(&transform),
        transform,
    }
}

/// Just the index of [`schubert_position`], without the adapted basis.
pub fn position_index(s: &Subspace, e: &FlagBasis) -> SchubertIndex {
    let f = e.field();
    let m = e.dim();
    let mut c = e.inverse().mul(s.basis());
    let mut unused: Vec<usize> = (0..s.dim()).collect();
    let mut rows = Vec::with_capacity(s.dim());
    for k in (0..m).rev() {
        let Some(pos) = unused.iter().position(|&col| c.get(k, col) != 0) else {
            continue;
        };
        let col = unused.remove(pos);
        rows.push(k + 1);
        let inv = f.inv(c.get(k, col));
        for &other in &unused {
            let factor = f.mul(c.get(k, other), inv);
            if factor != 0 {
                axpy_col(&mut c, other, col, f.neg(factor));
            }
        }
    }
    rows.reverse();
    SchubertIndex::new(m, rows).expect("pivot rows are distinct")
}

fn scale_col(m: &mut Matrix, col: usize, x: u64) {
    let f = m.field();
    for i in 0..m.rows() {
        let v = f.mul(m.get(i, col), x);
        m.set(i, col, v);
    }
}

fn axpy_col(m: &mut Matrix, dst: usize, src: usize, x: u64) {
    let f = m.field();
    for i in 0..m.rows() {
        let v = f.add(m.get(i, dst), f.mul(x, m.get(i, src)));
        m.set(i, dst, v);
    }
}

/// Rank profile `a -> dim(S ∩ E_a)` for `a = 0..=m`, computed directly from
/// ranks rather than by elimination.
pub fn rank_profile(s: &Subspace, e: &FlagBasis) -> Vec<usize> {
    (0..=e.dim())
        .map(|a| {
            let ea = e.subspace(a);
            s.dim() + a - s.basis().hcat(ea.basis()).rank()
        })
        .collect()
}

/// Coordinates on `W / V` from a fixed complement of `V`.
///
/// The complement is spanned by the standard vectors at the non-pivot rows of
/// `V`'s basis, so it depends on `V` alone and every flag induces its
/// quotient flag in the same coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// `(m - r) x m`: coordinates of the image of a vector in `W / V`.
    pub proj: Matrix,
    /// `m x (m - r)`: the complement, a section of `proj`.
    pub lift: Matrix,
}

impl Quotient {
    pub fn new(v: &Subspace) -> Self {
        let f = v.basis().field();
        let m = v.ambient_dim();
        let r = v.dim();
        let pivots = v.basis().transpose().rref().pivots;
        let free: Vec<usize> = (0..m).filter(|i| !pivots.contains(i)).collect();
        let lift = Matrix::identity(f, m).select_columns(&free);
        let full = v.basis().hcat(&lift);
        let inv = full
            .inverse()
            .expect("basis plus complement spans the space");
        let rows: Vec<usize> = (r..m).collect();
        Self {
            proj: inv.select_rows(&rows),
            lift,
        }
    }

    pub fn dim(&self) -> usize {
        self.proj.rows()
    }
}

/// Flags induced by `E` on `V` (as `E_{i_a} ∩ V`) and on `W / V` (as images
/// of `E_{α(b)}`, `α` the complement of the position `I`).
#[derive(Clone, Debug)]
pub struct InducedFlags {
    pub position: SchubertIndex,
    /// Flag on `V` in the coordinates of `V`'s basis.
    pub sub: FlagBasis,
    /// Flag on `W / V` in the coordinates of [`Quotient`].
    pub quotient: FlagBasis,
}

pub fn induced_flags(v: &Subspace, e: &FlagBasis, q: &Quotient) -> InducedFlags {
    let pos = schubert_position(v, e);
    let m = e.dim();
    let complement: Vec<usize> = (1..=m)
        .filter(|i| !pos.index.contains(*i))
        .map(|i| i - 1)
        .collect();
    let qbasis = q.proj.mul(&e.basis().select_columns(&complement));
    InducedFlags {
        sub: FlagBasis::new(pos.transform).expect("adapted basis is a basis"),
        quotient: FlagBasis::new(qbasis).expect("complementary flag vectors span the quotient"),
        position: pos.index,
    }
}
