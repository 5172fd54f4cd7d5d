//! Twisted group algebras and their irreducible projective characters.
//!
//! For a stabilizer subgroup `H` with a root-of-unity 2-cocycle `phi`, the
//! algebra has basis `{b_h}` and product `b_g b_h = phi(g,h)^{-1} b_{gh}`
//! (the inverse matches the twisted-action convention of the
//! equivariantization: modules over this algebra are exactly the twisted
//! actions `gh . v = phi(g,h) (g . (h . v))`). The character table is found
//! numerically: split the center with a random self-adjoint central element,
//! read degrees and character values from traces in the left regular
//! representation.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cohomology::{CocycleError, QaCocycle};
use crate::group::FiniteGroup;
use crate::numeric::{self, CMat, NumericError};
use crate::scalar::phase;

/// Largest supported twisted-algebra dimension.
pub const MAX_TWISTED_ORDER: usize = 120;

const SPLIT_RETRIES: usize = 20;
const EIGEN_GAP: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ProjRepError {
    #[error("cocycle is not a 2-cocycle at (g,h,k) = {0:?}")]
    NotA2Cocycle([usize; 3]),
    #[error("2-cocycle is not normalized at {0:?}")]
    NotNormalized([usize; 2]),
    #[error("group order {0} exceeds cap {1}")]
    SizeLimit(usize, usize),
    #[error("center split degenerate after {0} random attempts")]
    DegenerateSplit(usize),
    #[error("block trace {0} is not a perfect square within tolerance")]
    NonIntegralDegree(f64),
    #[error("character table fails orthogonality (residual {0:.3e})")]
    OrthogonalityFailure(f64),
    #[error("cocycle must be normalized and valid: {0}")]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// A normalized root-of-unity 2-cocycle on a finite group.
#[derive(Clone, Debug)]
pub struct TwistedCocycle {
    group: Arc<FiniteGroup>,
    level: i64,
    phi: Vec<i64>,
}

impl TwistedCocycle {
    pub fn new(group: Arc<FiniteGroup>, level: i64, phi: Vec<i64>) -> Result<Self, ProjRepError> {
        let n = group.order();
        assert_eq!(phi.len(), n * n, "phi must have |H|^2 entries");
        let tc = TwistedCocycle {
            group,
            level,
            phi: phi.into_iter().map(|e| e.rem_euclid(level)).collect(),
        };
        let g = &tc.group;
        let e = g.identity();
        for h in 0..n {
            if tc.phi_exp(e, h) != 0 {
                return Err(ProjRepError::NotNormalized([e, h]));
            }
            if tc.phi_exp(h, e) != 0 {
                return Err(ProjRepError::NotNormalized([h, e]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    // phi(a,b) + phi(ab,c) = phi(b,c) + phi(a,bc)
                    let lhs = tc.phi_exp(a, b) + tc.phi_exp(g.mul(a, b), c);
                    let rhs = tc.phi_exp(b, c) + tc.phi_exp(a, g.mul(b, c));
                    if (lhs - rhs).rem_euclid(level) != 0 {
                        return Err(ProjRepError::NotA2Cocycle([a, b, c]));
                    }
                }
            }
        }
        Ok(tc)
    }

    pub fn trivial(group: Arc<FiniteGroup>, level: i64) -> Self {
        let n = group.order();
        TwistedCocycle {
            group,
            level,
            phi: vec![0; n * n],
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    #[inline]
    pub fn phi_exp(&self, g: usize, h: usize) -> i64 {
        self.phi[g * self.group.order() + h]
    }

    /// Structure constant of `b_g b_h = w(g,h) b_{gh}` (so `phi^{-1}`).
    #[inline]
    fn weight(&self, g: usize, h: usize) -> Complex64 {
        phase(-self.phi_exp(g, h), self.level)
    }
}

/// Restriction of `gamma` to the stabilizer of an element `a` of `X`:
/// `phi_a(g,h) = gamma_{g,h}(a)`, a 2-cocycle on `Stab_G(a)`. Returns the
/// stabilizer as a standalone group together with its embedding into `G`.
pub fn stabilizer_2cocycle(
    xi: &QaCocycle,
    a: usize,
) -> Result<(TwistedCocycle, Vec<usize>), ProjRepError> {
    if !xi.is_normalized() {
        return Err(ProjRepError::Cocycle(CocycleError::NotNormalized));
    }
    let m = xi.module();
    let stab = m.action().stabilizer(a);
    let (h, embed) = m
        .group()
        .subgroup_group(&stab)
        .map_err(|e| ProjRepError::Cocycle(CocycleError::XMod(e.into())))?;
    let n = h.order();
    let mut phi = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            phi[i * n + j] = xi.gamma(embed[i], embed[j], a);
        }
    }
    let tc = TwistedCocycle::new(Arc::new(h), xi.level(), phi)?;
    Ok((tc, embed))
}

/// Irreducible projective character table of a twisted group algebra.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub degrees: Vec<usize>,
    /// `degrees.len() x |H|`, row `i` is the character of the `i`-th block.
    pub values: Vec<Vec<Complex64>>,
    pub cocycle: TwistedCocycle,
    pub seed: u64,
}

impl CharacterTable {
    pub fn num_irreducibles(&self) -> usize {
        self.degrees.len()
    }
}

/// Left regular representation of an algebra element given by coefficients.
fn left_regular(tc: &TwistedCocycle, coeffs: &[Complex64]) -> CMat {
    let n = tc.group.order();
    let mut m = CMat::zeros(n, n);
    for g in 0..n {
        if coeffs[g].norm_sqr() == 0.0 {
            continue;
        }
        for h in 0..n {
            let target = tc.group.mul(g, h);
            m[(target, h)] += coeffs[g] * tc.weight(g, h);
        }
    }
    m
}

/// Product of two elements in coefficient form.
fn algebra_mul(tc: &TwistedCocycle, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = tc.group.order();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for g in 0..n {
        if a[g].norm_sqr() == 0.0 {
            continue;
        }
        for h in 0..n {
            if b[h].norm_sqr() == 0.0 {
                continue;
            }
            out[tc.group.mul(g, h)] += a[g] * b[h] * tc.weight(g, h);
        }
    }
    out
}

/// Orthonormal basis of the center, as coefficient vectors.
fn center_basis(tc: &TwistedCocycle) -> Result<Vec<Vec<Complex64>>, ProjRepError> {
    let n = tc.group.order();
    // z central iff L(z) R(b_g) = R(b_g) L(z) for all g, where commutation
    // with every b_g reads: z_{k g^{-1}} w(kg^{-1}, g) = z_{g^{-1} k} w(g, g^{-1}k)
    let mut constraints = Vec::with_capacity(n);
    for g in 0..n {
        let gi = tc.group.inv(g);
        let mut c = CMat::zeros(n, n);
        for k in 0..n {
            let left = tc.group.mul(k, gi);
            let right = tc.group.mul(gi, k);
            c[(k, left)] += tc.weight(left, g);
            c[(k, right)] -= tc.weight(g, right);
        }
        constraints.push(c);
    }
    let ns = numeric::joint_nullspace(&constraints, n, 1e-8)?;
    Ok((0..ns.dim)
        .map(|j| (0..n).map(|i| ns.basis[(i, j)]).collect())
        .collect())
}

/// Computes the irreducible projective character table.
///
/// The center is split by diagonalizing the left action of a random
/// self-adjoint central element; each primitive idempotent `e_i` gives the
/// degree `d_i = sqrt(tr L(e_i))` and the character
/// `chi_i(h) = tr L(e_i b_h) / d_i`. Deterministic for a fixed seed; rows
/// are sorted by degree and then by value vector.
pub fn projective_character_table(
    tc: &TwistedCocycle,
    seed: u64,
) -> Result<CharacterTable, ProjRepError> {
    let n = tc.group.order();
    if n > MAX_TWISTED_ORDER {
        return Err(ProjRepError::SizeLimit(n, MAX_TWISTED_ORDER));
    }
    let center = center_basis(tc)?;
    let r = center.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut clusters: Option<Vec<CMat>> = None;
    for _attempt in 0..SPLIT_RETRIES {
        // random self-adjoint central element: z + z^* is central because
        // the involution b_g -> phi(g^{-1},g) b_{g^{-1}} preserves the center
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for basis_vec in &center {
            let t = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            for (c, b) in coeffs.iter_mut().zip(basis_vec) {
                *c += t * b;
            }
        }
        let l = left_regular(tc, &coeffs);
        let herm = (&l + l.adjoint()) * Complex64::new(0.5, 0.0);
        let (values, vectors) = numeric::hermitian_eigen(&herm);
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        // group eigenvalues into clusters; need exactly r well-separated ones
        let mut boundaries = vec![0usize];
        for i in 1..n {
            if (values[i] - values[i - 1]).abs() > EIGEN_GAP * scale {
                boundaries.push(i);
            }
        }
        boundaries.push(n);
        if boundaries.len() - 1 != r {
            continue;
        }
        let ok_gaps = boundaries[1..boundaries.len() - 1]
            .iter()
            .all(|&i| (values[i] - values[i - 1]).abs() > 10.0 * EIGEN_GAP * scale);
        if !ok_gaps {
            continue;
        }
        let mut projs = Vec::with_capacity(r);
        for w in boundaries.windows(2) {
            let cols = w[1] - w[0];
            let mut p = CMat::zeros(n, n);
            for c in 0..cols {
                let v = vectors.column(w[0] + c);
                p += &v * v.adjoint();
            }
            projs.push(p);
        }
        clusters = Some(projs);
        break;
    }
    let projs = clusters.ok_or(ProjRepError::DegenerateSplit(SPLIT_RETRIES))?;

    // idempotent elements: e_i = P_i applied to the unit b_e
    let e_idx = tc.group.identity();
    let mut rows: Vec<(usize, Vec<Complex64>)> = Vec::with_capacity(r);
    for p in &projs {
        let idem: Vec<Complex64> = (0..n).map(|i| p[(i, e_idx)]).collect();
        // trace of left multiplication by v is n * v_e
        let tr = (idem[e_idx] * n as f64).re;
        let d = tr.max(0.0).sqrt();
        let degree = d.round();
        if (d - degree).abs() > 1e-6 || degree < 1.0 {
            return Err(ProjRepError::NonIntegralDegree(tr));
        }
        let degree = degree as usize;
        let mut values = Vec::with_capacity(n);
        for h in 0..n {
            let mut bh = vec![Complex64::new(0.0, 0.0); n];
            bh[h] = Complex64::new(1.0, 0.0);
            let prod = algebra_mul(tc, &idem, &bh);
            let tr = prod[e_idx] * n as f64;
            values.push(tr / degree as f64);
        }
        rows.push((degree, values));
    }

    let sum_sq: usize = rows.iter().map(|(d, _)| d * d).sum();
    if sum_sq != n {
        return Err(ProjRepError::NonIntegralDegree(sum_sq as f64));
    }

    // canonical order: by degree, then by value vector on a 1e-9 grid,
    // descending, so the trivial character leads its degree block
    let key = |vals: &[Complex64]| -> Vec<(i64, i64)> {
        vals.iter()
            .map(|z| ((z.re / 1e-9).round() as i64, (z.im / 1e-9).round() as i64))
            .collect()
    };
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| key(&b.1).cmp(&key(&a.1))));

    // row orthogonality: sum_h chi_i(h) conj(chi_j(h)) = |H| delta_ij
    for i in 0..r {
        for j in 0..r {
            let mut acc = Complex64::new(0.0, 0.0);
            for h in 0..n {
                acc += rows[i].1[h] * rows[j].1[h].conj();
            }
            let expect = if i == j { n as f64 } else { 0.0 };
            let residual = (acc - expect).norm();
            if residual > 1e-8 * n as f64 {
                return Err(ProjRepError::OrthogonalityFailure(residual));
            }
        }
    }
    for (d, vals) in &rows {
        let residual = (vals[e_idx] - *d as f64).norm();
        if residual > 1e-8 * n as f64 {
            return Err(ProjRepError::OrthogonalityFailure(residual));
        }
    }

    Ok(CharacterTable {
        degrees: rows.iter().map(|(d, _)| *d).collect(),
        values: rows.into_iter().map(|(_, v)| v).collect(),
        cocycle: tc.clone(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupAction;

    fn table_for(group: FiniteGroup, seed: u64) -> CharacterTable {
        let tc = TwistedCocycle::trivial(Arc::new(group), 4);
        projective_character_table(&tc, seed).unwrap()
    }

    #[test]
    fn trivial_group_single_character() {
        let t = table_for(FiniteGroup::trivial(), 1);
        assert_eq!(t.degrees, vec![1]);
        assert!((t.values[0][0] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn z2_ordinary_characters() {
        let t = table_for(FiniteGroup::cyclic(2), 1);
        assert_eq!(t.degrees, vec![1, 1]);
        // rows sorted canonically: (1, -1) then (1, 1)
        let as_re: Vec<Vec<i64>> = t
            .values
            .iter()
            .map(|row| row.iter().map(|z| z.re.round() as i64).collect())
            .collect();
        assert!(as_re.contains(&vec![1, 1]));
        assert!(as_re.contains(&vec![1, -1]));
    }

    #[test]
    fn s3_degrees() {
        let t = table_for(FiniteGroup::symmetric(3).unwrap(), 7);
        assert_eq!(t.degrees, vec![1, 1, 2]);
    }

    #[test]
    fn nontrivial_cocycle_on_klein_four() {
        // alternating bicharacter phi((a1,a2),(b1,b2)) = (-1)^(a2 b1) is a
        // 2-cocycle whose twisted algebra is M_2: one character of degree 2
        let v4 = FiniteGroup::cyclic(2)
            .direct_product(&FiniteGroup::cyclic(2))
            .unwrap();
        let n = 4;
        let mut phi = vec![0i64; 16];
        for a in 0..n {
            for b in 0..n {
                let (a1, a2) = (a / 2, a % 2);
                let (b1, _b2) = (b / 2, b % 2);
                let _ = a1;
                phi[a * n + b] = ((a2 * b1) % 2) as i64;
            }
        }
        let tc = TwistedCocycle::new(Arc::new(v4), 2, phi).unwrap();
        let t = projective_character_table(&tc, 3).unwrap();
        assert_eq!(t.degrees, vec![2]);
        // character vanishes off the identity
        let e = t.cocycle.group().identity();
        assert!((t.values[0][e] - 2.0).norm() < 1e-9);
        for h in 0..4 {
            if h != e {
                assert!(t.values[0][h].norm() < 1e-9, "chi({h}) != 0");
            }
        }
    }

    #[test]
    fn determinism_and_seed_sensitivity() {
        let g = FiniteGroup::dihedral(4);
        let t1 = table_for(g.clone(), 42);
        let t2 = table_for(g, 42);
        assert_eq!(t1.degrees, t2.degrees);
        for (r1, r2) in t1.values.iter().zip(&t2.values) {
            for (a, b) in r1.iter().zip(r2) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn stabilizer_cocycle_of_trivial_data() {
        let m = Arc::new(crate::xmod::conjugation_module(&Arc::new(
            FiniteGroup::symmetric(3).unwrap(),
        )));
        let xi = QaCocycle::trivial(Arc::clone(&m), 6);
        let act = GroupAction::conjugation(m.group());
        let transposition = act.orbits().iter().find(|o| o.len() == 3).unwrap()[0];
        let (tc, embed) = stabilizer_2cocycle(&xi, transposition).unwrap();
        assert_eq!(tc.group().order(), 2);
        assert_eq!(embed.len(), 2);
        assert!(tc.phi.iter().all(|&e| e == 0));
    }

    #[test]
    fn rejects_sums_of_squares_mismatch() {
        // sanity: sum of squared degrees is |H| for a few groups
        for g in [
            FiniteGroup::cyclic(6),
            FiniteGroup::dihedral(6),
            FiniteGroup::symmetric(4).unwrap(),
        ] {
            let n = g.order();
            let t = table_for(g, 11);
            let s: usize = t.degrees.iter().map(|d| d * d).sum();
            assert_eq!(s, n);
        }
    }
}
