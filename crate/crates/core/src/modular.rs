//! Modular data of the equivariantization of the crossed pointed category
//! attached to a normalized quasi-abelian 3-cocycle.
//!
//! Simple objects are pairs (orbit representative, irreducible projective
//! character of its stabilizer), with Frobenius-Perron dimension
//! `|orbit| * deg(chi)`. The twist and unnormalized S-matrix are evaluated
//! from the cocycle data; the category is modular exactly when the boundary
//! map is surjective and the braiding is nondegenerate on `Ker d`, in which
//! case the S-matrix satisfies the standard modular relations and the
//! fusion rules follow from the normalized S-matrix.

use num_complex::Complex64;
use thiserror::Error;

use crate::cohomology::{self, CocycleError, QaCocycle};
use crate::numeric::{self, CMat, NumericError};
use crate::projrep::{self, CharacterTable, ProjRepError};
use crate::scalar::phase;

#[derive(Debug, Error)]
pub enum ModularError {
    #[error("cocycle must be normalized")]
    NotNormalized,
    #[error("cocycle fails condition ({0})")]
    InvalidCocycle(&'static str),
    #[error("boundary of {elem} does not stabilize representative {rep}")]
    StabilizerViolation { rep: usize, elem: usize },
    #[error("dimension count mismatch: sum of fpdim^2 = {got}, expected {expected}")]
    DimensionCount { got: u64, expected: u64 },
    #[error("modular data requested on a non-modular instance")]
    NotModular,
    #[error("fusion coefficient N[{i}][{j}][{k}] = {value} is not a nonnegative integer")]
    NonIntegralFusion {
        i: usize,
        j: usize,
        k: usize,
        value: f64,
    },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    ProjRep(#[from] ProjRepError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// A simple object label: orbit representative plus character index into the
/// stabilizer table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleObject {
    pub orbit_rep: usize,
    pub char_index: usize,
    pub degree: usize,
    pub fpdim: u64,
}

/// Per-orbit data backing the simple objects.
#[derive(Clone, Debug)]
pub struct OrbitBlock {
    pub rep: usize,
    pub elements: Vec<usize>,
    /// For each element of `X` in this orbit, the stored group element
    /// moving the representative there (identity for the representative).
    pub rep_g: Vec<Option<usize>>,
    /// Stabilizer element of `G` -> index in the stabilizer group, if any.
    pub stab_index: Vec<Option<usize>>,
    /// Embedding of stabilizer indices into `G`.
    pub stab_embed: Vec<usize>,
    pub table: CharacterTable,
}

/// The simple objects of the equivariantization, with their orbit blocks.
#[derive(Clone, Debug)]
pub struct Simples {
    pub list: Vec<SimpleObject>,
    pub orbits: Vec<OrbitBlock>,
    /// simple index -> orbit block index
    pub block_of: Vec<usize>,
    pub seed: u64,
}

impl Simples {
    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn fpdims(&self) -> Vec<u64> {
        self.list.iter().map(|s| s.fpdim).collect()
    }
}

fn require_valid(xi: &QaCocycle) -> Result<(), ModularError> {
    if !xi.is_normalized() {
        return Err(ModularError::NotNormalized);
    }
    let report = cohomology::check_qa3(xi);
    if let Some(bad) = report.conditions.iter().find(|c| !c.ok) {
        return Err(ModularError::InvalidCocycle(bad.condition.label()));
    }
    Ok(())
}

/// Enumerates the simple objects: one per (orbit representative,
/// irreducible projective character of the stabilizer).
pub fn simple_objects(xi: &QaCocycle, seed: u64) -> Result<Simples, ModularError> {
    require_valid(xi)?;
    let m = xi.module();
    let ng = m.group().order();
    let nx = m.space().order();
    let mut orbits = Vec::new();
    let mut list = Vec::new();
    let mut block_of = Vec::new();
    for orbit in m.action().orbits() {
        let rep = orbit[0];
        let (tc, stab_embed) = projrep::stabilizer_2cocycle(xi, rep)?;
        // per-orbit seed keeps tables independent but reproducible
        let table_seed = seed ^ (rep as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let table = projrep::projective_character_table(&tc, table_seed)?;
        let mut rep_g = vec![None; nx];
        rep_g[rep] = Some(m.group().identity());
        for x in &orbit {
            if rep_g[*x].is_none() {
                let g = (0..ng)
                    .find(|&g| m.act(g, rep) == *x)
                    .expect("orbit element must be reachable");
                rep_g[*x] = Some(g);
            }
        }
        let mut stab_index = vec![None; ng];
        for (i, &g) in stab_embed.iter().enumerate() {
            stab_index[g] = Some(i);
        }
        let block = orbits.len();
        for (char_index, &degree) in table.degrees.iter().enumerate() {
            list.push(SimpleObject {
                orbit_rep: rep,
                char_index,
                degree,
                fpdim: (orbit.len() * degree) as u64,
            });
            block_of.push(block);
        }
        orbits.push(OrbitBlock {
            rep,
            elements: orbit,
            rep_g,
            stab_index,
            stab_embed,
            table,
        });
    }
    let total: u64 = list.iter().map(|s| s.fpdim * s.fpdim).sum();
    let expected = (ng * nx) as u64;
    if total != expected {
        return Err(ModularError::DimensionCount {
            got: total,
            expected,
        });
    }
    Ok(Simples {
        list,
        orbits,
        block_of,
        seed,
    })
}

/// Canonical twist: `theta_(a,chi) = c(a,a) chi(d(a)) / deg(chi)`.
pub fn twist_vector(xi: &QaCocycle, simples: &Simples) -> Result<Vec<Complex64>, ModularError> {
    let m = xi.module();
    let mut out = Vec::with_capacity(simples.len());
    for (s, &block) in simples.list.iter().zip(&simples.block_of) {
        let orbit = &simples.orbits[block];
        let a = s.orbit_rep;
        let da = m.boundary(a);
        let idx = orbit.stab_index[da].ok_or(ModularError::StabilizerViolation {
            rep: a,
            elem: a,
        })?;
        let theta = phase(xi.c(a, a), xi.level()) * orbit.table.values[s.char_index][idx]
            / s.degree as f64;
        if (theta.norm() - 1.0).abs() > 1e-9 {
            return Err(ModularError::Consistency(format!(
                "twist has modulus {:.12} != 1",
                theta.norm()
            )));
        }
        out.push(theta);
    }
    Ok(out)
}

/// Unnormalized S-matrix:
///
/// `S_((a,chi),(b,chi')) = sum over x in the orbit of a and y in the orbit
/// of b commuting with x of c(x,y) c(y,x) *
/// gamma_{g, d(g^-1.y)}(a) gamma_{h, d(h^-1.x)}(b) /
/// (gamma_{d(y), g}(a) gamma_{d(x), h}(b)) *
/// chi(d(g^-1.y)) chi'(d(h^-1.x))`
///
/// where `g.a = x` and `h.b = y` use the stored coset representatives, and
/// character arguments go through the boundary map (for `y` commuting with
/// `x`, `d(g^-1.y)` stabilizes `a`).
pub fn s_matrix(xi: &QaCocycle, simples: &Simples) -> Result<Vec<Vec<Complex64>>, ModularError> {
    let reps: Vec<Vec<Option<usize>>> = simples.orbits.iter().map(|o| o.rep_g.clone()).collect();
    s_matrix_with_representatives(xi, simples, &reps)
}

/// S-matrix with explicit coset representatives per orbit (testing hook for
/// the representative-independence property). `reps[block][x]` must satisfy
/// `g . rep = x` for every `x` in the block's orbit.
pub fn s_matrix_with_representatives(
    xi: &QaCocycle,
    simples: &Simples,
    reps: &[Vec<Option<usize>>],
) -> Result<Vec<Vec<Complex64>>, ModularError> {
    let m = xi.module();
    let xg = m.space();
    let gg = m.group();
    let n = xi.level();
    let r = simples.len();
    let mut s = vec![vec![Complex64::new(0.0, 0.0); r]; r];
    for i in 0..r {
        let si = &simples.list[i];
        let bi = &simples.orbits[simples.block_of[i]];
        let chi = &bi.table.values[si.char_index];
        let a = si.orbit_rep;
        for j in 0..r {
            let sj = &simples.list[j];
            let bj = &simples.orbits[simples.block_of[j]];
            let chi2 = &bj.table.values[sj.char_index];
            let b = sj.orbit_rep;
            let mut acc = Complex64::new(0.0, 0.0);
            for &x in &bi.elements {
                let g = reps[simples.block_of[i]][x].expect("x lies in the orbit of a");
                debug_assert_eq!(m.act(g, a), x);
                let ginv = gg.inv(g);
                for &y in &bj.elements {
                    if xg.mul(x, y) != xg.mul(y, x) {
                        continue;
                    }
                    let h = reps[simples.block_of[j]][y].expect("y lies in the orbit of b");
                    debug_assert_eq!(m.act(h, b), y);
                    let hinv = gg.inv(h);
                    let y_back = m.act(ginv, y);
                    let x_back = m.act(hinv, x);
                    let dy_back = m.boundary(y_back);
                    let dx_back = m.boundary(x_back);
                    let ia = bi.stab_index[dy_back].ok_or(ModularError::StabilizerViolation {
                        rep: a,
                        elem: y_back,
                    })?;
                    let ib = bj.stab_index[dx_back].ok_or(ModularError::StabilizerViolation {
                        rep: b,
                        elem: x_back,
                    })?;
                    let exp = xi.c(x, y) + xi.c(y, x) + xi.gamma(g, dy_back, a)
                        + xi.gamma(h, dx_back, b)
                        - xi.gamma(m.boundary(y), g, a)
                        - xi.gamma(m.boundary(x), h, b);
                    acc += phase(exp.rem_euclid(n), n) * chi[ia] * chi2[ib];
                }
            }
            s[i][j] = acc;
        }
    }
    Ok(s)
}

/// Gauss sum `tau = |G| * sum over a in Ker d of c(a,a)`.
pub fn gauss_sum(xi: &QaCocycle) -> Result<Complex64, ModularError> {
    let ker = xi.module().ker_boundary().map_err(CocycleError::from)?;
    let total: Complex64 = ker
        .iter()
        .map(|&a| phase(xi.c(a, a), xi.level()))
        .sum();
    Ok(total * xi.module().group().order() as f64)
}

/// Central charge `zeta = (1/sqrt(|Ker d|)) * sum over a in Ker d of c(a,a)`.
pub fn central_charge(xi: &QaCocycle) -> Result<Complex64, ModularError> {
    let ker = xi.module().ker_boundary().map_err(CocycleError::from)?;
    let total: Complex64 = ker
        .iter()
        .map(|&a| phase(xi.c(a, a), xi.level()))
        .sum();
    Ok(total / (ker.len() as f64).sqrt())
}

/// Modularity criterion: the boundary map is surjective and the braiding is
/// nondegenerate on `Ker d`. Returns the verdict and human-readable reasons
/// for a negative one.
pub fn is_modular(xi: &QaCocycle) -> Result<(bool, Vec<String>), ModularError> {
    let m = xi.module();
    let mut reasons = Vec::new();
    let mut image: Vec<usize> = m.boundary_map().to_vec();
    image.sort_unstable();
    image.dedup();
    if image.len() != m.group().order() {
        reasons.push("boundary map is not surjective".to_string());
    }
    if !cohomology::is_nondegenerate(xi).map_err(ModularError::Cocycle)? {
        reasons.push("braiding is degenerate on Ker d".to_string());
    }
    Ok((reasons.is_empty(), reasons))
}

/// Complete modular data bundle.
#[derive(Clone, Debug)]
pub struct ModularData {
    pub simples: Simples,
    pub twists: Vec<Complex64>,
    pub s: Vec<Vec<Complex64>>,
    pub gauss: Complex64,
    pub charge: Complex64,
    pub modular: bool,
    pub reasons: Vec<String>,
    /// global dimension `|G| |X|`
    pub dim: u64,
}

impl ModularData {
    pub fn rank(&self) -> usize {
        self.simples.len()
    }

    /// Normalized S-matrix `s = S / sqrt(|G||X|)`.
    pub fn s_normalized(&self) -> Vec<Vec<Complex64>> {
        let scale = 1.0 / (self.dim as f64).sqrt();
        self.s
            .iter()
            .map(|row| row.iter().map(|z| z * scale).collect())
            .collect()
    }
}

fn to_cmat(rows: &[Vec<Complex64>]) -> CMat {
    let r = rows.len();
    CMat::from_fn(r, r, |i, j| rows[i][j])
}

/// Computes simples, twists, S-matrix, Gauss sum, central charge and the
/// modularity verdict, cross-checking the numeric modular relations against
/// the algebraic criterion.
pub fn modular_data(xi: &QaCocycle, seed: u64) -> Result<ModularData, ModularError> {
    let simples = simple_objects(xi, seed)?;
    let twists = twist_vector(xi, &simples)?;
    let s = s_matrix(xi, &simples)?;
    let gauss = gauss_sum(xi)?;
    let charge = central_charge(xi)?;
    let (modular, reasons) = is_modular(xi)?;
    let m = xi.module();
    let dim = (m.group().order() * m.space().order()) as u64;

    // symmetry holds in all cases
    let r = simples.len();
    let scale = s
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);
    for i in 0..r {
        for j in 0..r {
            if (s[i][j] - s[j][i]).norm() > 1e-8 * scale {
                return Err(ModularError::Consistency(format!(
                    "S is not symmetric at ({i},{j})"
                )));
            }
        }
    }

    let smat = to_cmat(&s);
    if modular {
        // S conj(S)^T = |G||X| I
        let product = &smat * smat.conjugate().transpose();
        let target = CMat::identity(r, r) * Complex64::new(dim as f64, 0.0);
        let err = numeric::max_abs_diff(&product, &target);
        if err > 1e-6 * dim as f64 {
            return Err(ModularError::Consistency(format!(
                "modular instance but S conj(S)^T deviates from |G||X| I by {err:.3e}"
            )));
        }
        // Gauss sum matches sum of theta_i d_i^2
        let mut tau = Complex64::new(0.0, 0.0);
        for (t, sobj) in twists.iter().zip(&simples.list) {
            tau += t * (sobj.fpdim * sobj.fpdim) as f64;
        }
        if (tau - gauss).norm() > 1e-6 * dim as f64 {
            return Err(ModularError::Consistency(format!(
                "sum theta_i d_i^2 = {tau} but Gauss sum = {gauss}"
            )));
        }
        if (charge.norm() - 1.0).abs() > 1e-9 {
            return Err(ModularError::Consistency(format!(
                "central charge has modulus {:.12}",
                charge.norm()
            )));
        }
    } else {
        // degenerate data must show up as a singular S-matrix
        let rank = numeric_rank(&smat, 1e-9);
        if rank >= r {
            return Err(ModularError::Consistency(
                "non-modular instance with numerically invertible S".to_string(),
            ));
        }
    }

    Ok(ModularData {
        simples,
        twists,
        s,
        gauss,
        charge,
        modular,
        reasons,
        dim,
    })
}

/// Numerical rank via Gram-matrix eigenvalues.
pub fn numeric_rank(m: &CMat, rel_tol: f64) -> usize {
    let gram = m.adjoint() * m;
    let (values, _) = numeric::hermitian_eigen(&gram);
    let scale = values.last().copied().unwrap_or(0.0).max(1e-300);
    values.iter().filter(|&&v| v > rel_tol * scale).count()
}

/// Fusion multiplicities `N_ij^k`.
#[derive(Clone, Debug)]
pub struct FusionTensor {
    pub rank: usize,
    coeffs: Vec<u64>,
}

impl FusionTensor {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> u64 {
        self.coeffs[(i * self.rank + j) * self.rank + k]
    }

    /// The dual index `i*`, the unique `j` with `N_ij^0 = 1`.
    pub fn dual(&self, i: usize) -> usize {
        (0..self.rank)
            .find(|&j| self.get(i, j, 0) == 1)
            .expect("every simple has a dual")
    }
}

/// Verlinde formula on the normalized S-matrix:
/// `N_ij^k = sum_m s_im s_jm conj(s_km) / s_0m`.
pub fn verlinde_fusion(md: &ModularData) -> Result<FusionTensor, ModularError> {
    if !md.modular {
        return Err(ModularError::NotModular);
    }
    let r = md.rank();
    let s = md.s_normalized();
    let mut coeffs = vec![0u64; r * r * r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let mut acc = Complex64::new(0.0, 0.0);
                for m in 0..r {
                    acc += s[i][m] * s[j][m] * s[k][m].conj() / s[0][m];
                }
                let rounded = acc.re.round();
                if acc.im.abs() > 1e-6 || (acc.re - rounded).abs() > 1e-6 || rounded < 0.0 {
                    return Err(ModularError::NonIntegralFusion {
                        i,
                        j,
                        k,
                        value: acc.re,
                    });
                }
                coeffs[(i * r + j) * r + k] = rounded as u64;
            }
        }
    }
    let fusion = FusionTensor { rank: r, coeffs };
    // unit constraints and the dimension homomorphism
    let d = md.simples.fpdims();
    for j in 0..r {
        for k in 0..r {
            let expect = u64::from(j == k);
            if fusion.get(0, j, k) != expect {
                return Err(ModularError::Consistency(format!(
                    "N_0{j}^{k} = {} != {expect}",
                    fusion.get(0, j, k)
                )));
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            let total: u64 = (0..r).map(|k| fusion.get(i, j, k) * d[k]).sum();
            if total != d[i] * d[j] {
                return Err(ModularError::Consistency(format!(
                    "dimension homomorphism fails at ({i},{j}): {total} != {}",
                    d[i] * d[j]
                )));
            }
        }
    }
    Ok(fusion)
}

/// All twists of the category: one per invertible self-dual object `j`,
/// with `theta'_i = theta_i S_ij / (d_i d_j)`, each verified against the
/// balancing relation `theta'_i theta'_j S_ij = sum_k N_{i* j}^k d_k theta'_k`.
pub fn enumerate_twists(
    md: &ModularData,
    fusion: &FusionTensor,
) -> Result<Vec<Vec<Complex64>>, ModularError> {
    if !md.modular {
        return Err(ModularError::NotModular);
    }
    let r = md.rank();
    let d = md.simples.fpdims();
    let mut out = Vec::new();
    for j in 0..r {
        if d[j] != 1 || fusion.dual(j) != j {
            continue;
        }
        let candidate: Vec<Complex64> = (0..r)
            .map(|i| md.twists[i] * md.s[i][j] / (d[i] * d[j]) as f64)
            .collect();
        // balancing relation for every pair
        for i in 0..r {
            for l in 0..r {
                let lhs = candidate[i] * candidate[l] * md.s[i][l];
                let idual = fusion.dual(i);
                let mut rhs = Complex64::new(0.0, 0.0);
                for k in 0..r {
                    rhs += Complex64::new((fusion.get(idual, l, k) * d[k]) as f64, 0.0)
                        * candidate[k];
                }
                if (lhs - rhs).norm() > 1e-6 * md.dim as f64 {
                    return Err(ModularError::Consistency(format!(
                        "twist candidate from invertible {j} fails balancing at ({i},{l})"
                    )));
                }
            }
        }
        out.push(candidate);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::QaCocycle;
    use crate::group::FiniteGroup;
    use crate::xmod::{conjugation_module, trivial_base_module, CrossedModule};
    use std::sync::Arc;

    fn z2_conj() -> Arc<CrossedModule> {
        Arc::new(conjugation_module(&Arc::new(FiniteGroup::cyclic(2))))
    }

    fn point_z2() -> Arc<CrossedModule> {
        Arc::new(trivial_base_module(&Arc::new(FiniteGroup::cyclic(2))).unwrap())
    }

    fn semion() -> QaCocycle {
        QaCocycle::from_entries(point_z2(), 4, &[([1, 1, 1], 2)], &[], &[], &[([1, 1], 1)])
            .unwrap()
    }

    fn approx(a: Complex64, re: f64, im: f64) -> bool {
        (a - Complex64::new(re, im)).norm() < 1e-9
    }

    #[test]
    fn trivial_z2_simples_and_twists() {
        let xi = QaCocycle::trivial(z2_conj(), 2);
        let simples = simple_objects(&xi, 1).unwrap();
        assert_eq!(simples.len(), 4);
        assert_eq!(simples.fpdims(), vec![1, 1, 1, 1]);
        // identity simple first
        assert_eq!(simples.list[0].orbit_rep, 0);
        assert_eq!(simples.list[0].char_index, 0);
        let theta = twist_vector(&xi, &simples).unwrap();
        // canonical order: (0,triv),(0,sgn),(1,triv),(1,sgn): theta = chi(a)
        assert!(approx(theta[0], 1.0, 0.0));
        assert!(approx(theta[1], 1.0, 0.0));
        assert!(approx(theta[2], 1.0, 0.0));
        assert!(approx(theta[3], -1.0, 0.0));
    }

    #[test]
    fn trivial_z2_s_matrix_rows() {
        let xi = QaCocycle::trivial(z2_conj(), 2);
        let simples = simple_objects(&xi, 1).unwrap();
        let s = s_matrix(&xi, &simples).unwrap();
        let expect = [
            [1.0, 1.0, 1.0, 1.0],
            [1.0, 1.0, -1.0, -1.0],
            [1.0, -1.0, 1.0, -1.0],
            [1.0, -1.0, -1.0, 1.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!(
                    approx(s[i][j], expect[i][j], 0.0),
                    "S[{i}][{j}] = {}",
                    s[i][j]
                );
            }
        }
    }

    #[test]
    fn bicharacter_twist_pattern() {
        // c(x,y) = (-1)^{xy}: twist pattern (1,1,-1,1) in canonical order
        let xi =
            QaCocycle::from_entries(z2_conj(), 2, &[], &[], &[], &[([1, 1], 1)]).unwrap();
        let simples = simple_objects(&xi, 1).unwrap();
        let theta = twist_vector(&xi, &simples).unwrap();
        assert!(approx(theta[0], 1.0, 0.0));
        assert!(approx(theta[1], 1.0, 0.0));
        assert!(approx(theta[2], -1.0, 0.0));
        assert!(approx(theta[3], 1.0, 0.0));
    }

    #[test]
    fn semion_modular_data() {
        let xi = semion();
        let md = modular_data(&xi, 5).unwrap();
        assert_eq!(md.rank(), 2);
        assert_eq!(md.simples.fpdims(), vec![1, 1]);
        assert!(approx(md.twists[0], 1.0, 0.0));
        assert!(approx(md.twists[1], 0.0, 1.0));
        assert!(approx(md.s[0][0], 1.0, 0.0));
        assert!(approx(md.s[0][1], 1.0, 0.0));
        assert!(approx(md.s[1][0], 1.0, 0.0));
        assert!(approx(md.s[1][1], -1.0, 0.0));
        assert!(approx(md.gauss, 1.0, 1.0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(approx(md.charge, h, h));
        assert!(md.modular);
    }

    #[test]
    fn s3_simples() {
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let m = Arc::new(conjugation_module(&g));
        let xi = QaCocycle::trivial(m, 6);
        let simples = simple_objects(&xi, 3).unwrap();
        assert_eq!(simples.len(), 8);
        let mut dims = simples.fpdims();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 3, 3]);
        let sq: u64 = dims.iter().map(|d| d * d).sum();
        assert_eq!(sq, 36);
    }

    #[test]
    fn gauss_sum_examples() {
        let xi = QaCocycle::trivial(z2_conj(), 2);
        assert!(approx(gauss_sum(&xi).unwrap(), 2.0, 0.0));
        assert!(approx(central_charge(&xi).unwrap(), 1.0, 0.0));
        let m = Arc::new(conjugation_module(&Arc::new(FiniteGroup::trivial())));
        let triv = QaCocycle::trivial(m, 2);
        assert!(approx(gauss_sum(&triv).unwrap(), 1.0, 0.0));
        assert!(approx(central_charge(&triv).unwrap(), 1.0, 0.0));
    }

    #[test]
    fn first_row_is_fpdims() {
        for (xi, seed) in [
            (QaCocycle::trivial(z2_conj(), 2), 1u64),
            (semion(), 2),
            (
                QaCocycle::trivial(
                    Arc::new(conjugation_module(&Arc::new(
                        FiniteGroup::symmetric(3).unwrap(),
                    ))),
                    6,
                ),
                3,
            ),
        ] {
            let simples = simple_objects(&xi, seed).unwrap();
            let s = s_matrix(&xi, &simples).unwrap();
            for (j, d) in simples.fpdims().iter().enumerate() {
                assert!(
                    (s[0][j] - *d as f64).norm() < 1e-9,
                    "S[0][{j}] = {} != {d}",
                    s[0][j]
                );
            }
        }
    }

    #[test]
    fn representative_independence() {
        use rand::Rng;
        use rand::SeedableRng;
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let m = Arc::new(conjugation_module(&g));
        let xi = QaCocycle::trivial(Arc::clone(&m), 6);
        let simples = simple_objects(&xi, 3).unwrap();
        let s0 = s_matrix(&xi, &simples).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _trial in 0..5 {
            // rechoose g per orbit element: any g' = g s with s in Stab(rep)
            let reps: Vec<Vec<Option<usize>>> = simples
                .orbits
                .iter()
                .map(|o| {
                    let mut v = vec![None; m.space().order()];
                    for &x in &o.elements {
                        let candidates: Vec<usize> = (0..m.group().order())
                            .filter(|&gg| m.act(gg, o.rep) == x)
                            .collect();
                        v[x] = Some(candidates[rng.random_range(0..candidates.len())]);
                    }
                    v
                })
                .collect();
            let s1 = s_matrix_with_representatives(&xi, &simples, &reps).unwrap();
            for i in 0..simples.len() {
                for j in 0..simples.len() {
                    assert!((s0[i][j] - s1[i][j]).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn degenerate_boundary_not_surjective() {
        // G = Z2 acting trivially on X = {e}
        let g = Arc::new(FiniteGroup::cyclic(2));
        let x = Arc::new(FiniteGroup::trivial());
        let action = crate::group::GroupAction::trivial(Arc::clone(&g), Arc::clone(&x));
        let m = Arc::new(CrossedModule::new(g, x, vec![0], action).unwrap());
        let xi = QaCocycle::trivial(m, 2);
        let md = modular_data(&xi, 1).unwrap();
        assert!(!md.modular);
        assert!(md.reasons.iter().any(|r| r.contains("not surjective")));
        assert_eq!(md.rank(), 2);
        assert!(numeric_rank(&to_cmat(&md.s), 1e-9) < md.rank());
        assert!(matches!(
            verlinde_fusion(&md),
            Err(ModularError::NotModular)
        ));
    }

    #[test]
    fn degenerate_braiding() {
        let xi = QaCocycle::trivial(point_z2(), 4);
        let md = modular_data(&xi, 1).unwrap();
        assert!(!md.modular);
        assert!(md.reasons.iter().any(|r| r.contains("degenerate")));
        assert!(numeric_rank(&to_cmat(&md.s), 1e-9) < md.rank());
    }

    #[test]
    fn verlinde_on_group_like_instances() {
        // trivial Z2 conjugation data: fusion of Z2 x Z2
        let xi = QaCocycle::trivial(z2_conj(), 2);
        let md = modular_data(&xi, 1).unwrap();
        let fusion = verlinde_fusion(&md).unwrap();
        for i in 0..4 {
            assert_eq!(fusion.dual(i), i);
            for j in 0..4 {
                let products: Vec<u64> = (0..4).map(|k| fusion.get(i, j, k)).collect();
                assert_eq!(products.iter().sum::<u64>(), 1);
            }
        }
        // semion: Z2 fusion
        let md = modular_data(&semion(), 1).unwrap();
        let fusion = verlinde_fusion(&md).unwrap();
        assert_eq!(fusion.get(1, 1, 0), 1);
        assert_eq!(fusion.get(1, 1, 1), 0);
    }

    #[test]
    fn twist_enumeration_counts() {
        // semion: both invertibles self-dual, 2 twists: (1,i) and (1,-i)
        let md = modular_data(&semion(), 1).unwrap();
        let fusion = verlinde_fusion(&md).unwrap();
        let twists = enumerate_twists(&md, &fusion).unwrap();
        assert_eq!(twists.len(), 2);
        let tset: Vec<Vec<(i64, i64)>> = twists
            .iter()
            .map(|t| {
                t.iter()
                    .map(|z| (z.re.round() as i64, z.im.round() as i64))
                    .collect()
            })
            .collect();
        assert!(tset.contains(&vec![(1, 0), (0, 1)]));
        assert!(tset.contains(&vec![(1, 0), (0, -1)]));

        // trivial Z2 conjugation: 4 self-dual invertibles, 4 twists
        let md = modular_data(&QaCocycle::trivial(z2_conj(), 2), 1).unwrap();
        let fusion = verlinde_fusion(&md).unwrap();
        assert_eq!(enumerate_twists(&md, &fusion).unwrap().len(), 4);

        // trivial crossed module: a single twist
        let m = Arc::new(conjugation_module(&Arc::new(FiniteGroup::trivial())));
        let md = modular_data(&QaCocycle::trivial(m, 2), 1).unwrap();
        let fusion = verlinde_fusion(&md).unwrap();
        assert_eq!(enumerate_twists(&md, &fusion).unwrap().len(), 1);
    }

    #[test]
    fn s3_modular_relations() {
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let m = Arc::new(conjugation_module(&g));
        let xi = QaCocycle::trivial(m, 6);
        let md = modular_data(&xi, 3).unwrap();
        assert!(md.modular);
        assert!(approx(md.gauss, 6.0, 0.0));
        let fusion = verlinde_fusion(&md).unwrap();
        // spot check: the fusion ring is the Verlinde ring of D(S3)
        let d = md.simples.fpdims();
        for i in 0..8 {
            for j in 0..8 {
                let total: u64 = (0..8).map(|k| fusion.get(i, j, k) * d[k]).sum();
                assert_eq!(total, d[i] * d[j]);
            }
        }
    }
}
