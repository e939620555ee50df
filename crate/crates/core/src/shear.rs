//! Shearing coordinates and their transformation under flips.
//!
//! This is the classical shadow of the quantized groupoid. A word that
//! represents the identity mapping class must fix every shear vector, which
//! gives a numeric oracle independent of the rewriting machinery.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::triangulation::{ArcLabel, Triangulation, TriangulationError};
use crate::word::{FlipWord, Generator};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShearError {
    #[error("degenerate ideal quadrilateral")]
    DegenerateQuadrilateral,
    #[error("shear vector has {got} entries, triangulation has {expected} arcs")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("shear vector entry for arc {0} is not finite")]
    NonFinite(u32),
    #[error("generator {index} is not applicable: {source}")]
    WordNotApplicable { index: usize, source: TriangulationError },
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

/// A point on the boundary of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IdealPoint {
    Real(f64),
    Infinity,
}

/// Four ideal points in counter-clockwise order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdealQuadrilateral {
    pub points: [IdealPoint; 4],
}

impl IdealQuadrilateral {
    pub fn new(p1: IdealPoint, p2: IdealPoint, p3: IdealPoint, p4: IdealPoint) -> Self {
        Self { points: [p1, p2, p3, p4] }
    }
}

/// Shear coordinate of the diagonal `p1 p3`:
/// `log(-(p1 - p2)(p3 - p4) / ((p1 - p4)(p3 - p2)))`.
pub fn shear_from_cross_ratio(q: &IdealQuadrilateral) -> Result<f64, ShearError> {
    let p = q.points;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return Err(ShearError::DegenerateQuadrilateral);
            }
        }
    }
    // A factor containing infinity cancels against the other one that does;
    // only its sign survives.
    let factor = |a: IdealPoint, b: IdealPoint| match (a, b) {
        (IdealPoint::Real(x), IdealPoint::Real(y)) => x - y,
        (IdealPoint::Infinity, _) => 1.0,
        (_, IdealPoint::Infinity) => -1.0,
    };
    let num = factor(p[0], p[1]) * factor(p[2], p[3]);
    let den = factor(p[0], p[3]) * factor(p[2], p[1]);
    let arg = -num / den;
    if arg <= 0.0 || !arg.is_finite() {
        return Err(ShearError::DegenerateQuadrilateral);
    }
    Ok(arg.ln())
}

/// `log(1 + e^z)` without overflow.
pub fn phi(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `φ'(z) = 1 / (1 + e^{-z})`.
fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Shear coordinates indexed by arc label; entry `i` belongs to arc `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShearVector(pub Vec<f64>);

impl ShearVector {
    pub fn get(&self, a: ArcLabel) -> f64 {
        self.0[a.0 as usize - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Uniform sample from `[-r, r]^n`.
    pub fn random<R: Rng>(n: usize, r: f64, rng: &mut R) -> Self {
        Self((0..n).map(|_| rng.gen_range(-r..=r)).collect())
    }

    /// `‖self - other‖∞ / max(‖self‖∞, 1)`.
    pub fn relative_error(&self, other: &Self) -> f64 {
        let scale = self.0.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let diff = self
            .0
            .iter()
            .zip(&other.0)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        diff / scale
    }

    fn check(&self, t: &Triangulation) -> Result<(), ShearError> {
        let n = t.arc_count() as usize;
        if self.0.len() != n {
            return Err(ShearError::DimensionMismatch { expected: n, got: self.0.len() });
        }
        if let Some(i) = self.0.iter().position(|x| !x.is_finite()) {
            return Err(ShearError::NonFinite(i as u32 + 1));
        }
        Ok(())
    }
}

/// Deterministic samples for the oracle checks.
pub fn seeded_samples(n: usize, count: usize, seed: u64) -> Vec<ShearVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| ShearVector::random(n, 3.0, &mut rng)).collect()
}

/// Coordinates in `flip(T, a)` of the point with coordinates `t` in `T`.
pub fn flip_coords(tri: &Triangulation, a: ArcLabel, t: &ShearVector) -> Result<ShearVector, ShearError> {
    t.check(tri)?;
    tri.flip(a)?;
    let eps = tri.epsilon();
    let ta = t.get(a);
    let mut out = t.0.clone();
    for b in tri.arcs() {
        let e = eps.get(a, b);
        if b == a {
            out[b.0 as usize - 1] = -ta;
        } else if e != 0 {
            out[b.0 as usize - 1] += e as f64 * phi(e.signum() as f64 * ta);
        }
    }
    Ok(ShearVector(out))
}

/// Relabeling: the coordinate of arc `x` moves to arc `p(x)`.
fn permute_coords(p: &crate::LabelPermutation, t: &ShearVector) -> ShearVector {
    let mut out = t.0.clone();
    for x in p.support() {
        out[p.apply(x) as usize - 1] = t.0[x as usize - 1];
    }
    ShearVector(out)
}

/// Transports `t` along a generator list starting at `tri`.
pub fn gens_action(
    tri: &Triangulation,
    gens: &[Generator],
    t: &ShearVector,
) -> Result<(Triangulation, ShearVector), ShearError> {
    t.check(tri)?;
    let mut state = tri.clone();
    let mut coords = t.clone();
    for (index, g) in gens.iter().enumerate() {
        let next = g.act(&state).map_err(|source| ShearError::WordNotApplicable { index, source })?;
        coords = match g {
            Generator::Flip(a) => flip_coords(&state, *a, &coords)?,
            Generator::Perm(p) => permute_coords(p, &coords),
        };
        state = next;
    }
    Ok((state, coords))
}

pub fn word_action(tri: &Triangulation, w: &FlipWord, t: &ShearVector) -> Result<(Triangulation, ShearVector), ShearError> {
    gens_action(tri, w.gens(), t)
}

/// Closed-form Jacobian `J[i][j] = ∂t'(i) / ∂t(j)` of [`flip_coords`].
pub fn jacobian(tri: &Triangulation, a: ArcLabel, t: &ShearVector) -> Result<DMatrix<f64>, ShearError> {
    t.check(tri)?;
    tri.flip(a)?;
    let n = tri.arc_count() as usize;
    let eps = tri.epsilon();
    let ia = a.0 as usize - 1;
    let ta = t.get(a);
    let mut j = DMatrix::identity(n, n);
    j[(ia, ia)] = -1.0;
    for b in tri.arcs() {
        let e = eps.get(a, b);
        if b != a && e != 0 {
            let s = e.signum() as f64;
            j[(b.0 as usize - 1, ia)] = e as f64 * s * logistic(s * ta);
        }
    }
    Ok(j)
}

/// Central finite-difference Jacobian of [`flip_coords`].
pub fn jacobian_fd(tri: &Triangulation, a: ArcLabel, t: &ShearVector, h: f64) -> Result<DMatrix<f64>, ShearError> {
    let n = tri.arc_count() as usize;
    let mut j = DMatrix::zeros(n, n);
    for col in 0..n {
        let mut plus = t.clone();
        let mut minus = t.clone();
        plus.0[col] += h;
        minus.0[col] -= h;
        let fp = flip_coords(tri, a, &plus)?;
        let fm = flip_coords(tri, a, &minus)?;
        for row in 0..n {
            j[(row, col)] = (fp.0[row] - fm.0[row]) / (2.0 * h);
        }
    }
    Ok(j)
}

fn epsilon_matrix(tri: &Triangulation) -> DMatrix<f64> {
    let eps = tri.epsilon();
    let n = eps.size();
    DMatrix::from_fn(n, n, |i, j| eps.at(i, j) as f64)
}

/// `max |J ε(T) Jᵀ - ε(flip(T, a))|` at `t`.
pub fn poisson_invariance_check(tri: &Triangulation, a: ArcLabel, t: &ShearVector) -> Result<f64, ShearError> {
    let j = jacobian(tri, a, t)?;
    let flipped = tri.flip(a)?;
    let pushed = &j * epsilon_matrix(tri) * j.transpose();
    Ok((pushed - epsilon_matrix(&flipped)).amax())
}

/// Largest relative displacement of the samples under an automorphism word.
/// Returns `None` when the word does not close up.
pub fn relator_residual(tri: &Triangulation, gens: &[Generator], samples: &[ShearVector]) -> Result<Option<f64>, ShearError> {
    let mut worst = 0.0f64;
    for t in samples {
        let (end, moved) = gens_action(tri, gens, t)?;
        if !end.labeled_equal(tri) {
            return Ok(None);
        }
        worst = worst.max(t.relative_error(&moved));
    }
    Ok(Some(worst))
}
