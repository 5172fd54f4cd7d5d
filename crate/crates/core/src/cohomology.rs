//! Quasi-abelian 3-cocycles on finite crossed modules, with coefficients in
//! the group of `N`-th roots of unity.
//!
//! A cocycle is a quadruple `(omega, gamma, mu, c)` of root-of-unity valued
//! maps on the crossed module, stored as exponents mod the level `N`. Every
//! defining condition is then a Z-linear equation mod `N`, so cocycle
//! checking, coboundary membership, normalization and the cohomology group
//! itself are exact integer computations on top of [`crate::snf`].

use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::group::FiniteGroup;
use crate::scalar::ScalarExp;
use crate::snf::{self, MatZ};
use crate::xmod::{self, CrossedModule, XModError, XModHom};

/// Default cap on the number of cocycle variables in linear-algebra passes.
pub const DEFAULT_VAR_CAP: usize = 5000;

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error("levels differ: {0} vs {1}")]
    LevelMismatch(i64, i64),
    #[error("cocycles live on different crossed modules")]
    ModuleMismatch,
    #[error("variable count {0} exceeds cap {1}")]
    SizeLimit(usize, usize),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("cocycle is not normalized")]
    NotNormalized,
    #[error("normalization is infeasible; this indicates corrupted input")]
    NormalizationInfeasible,
    #[error("c(x,y)c(y,x) is not a bicharacter on Ker d; cocycle data is corrupt")]
    BilinearityFailure,
    #[error("map is not a crossed-module homomorphism")]
    InvalidHom,
    #[error("entry out of range: {0}")]
    BadEntry(String),
    #[error(transparent)]
    XMod(#[from] XModError),
}

/// Index layout for the cocycle variable vector
/// `[omega | gamma | mu | c]`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Layout {
    pub ng: usize,
    pub nx: usize,
    pub off_gamma: usize,
    pub off_mu: usize,
    pub off_c: usize,
    pub total: usize,
}

impl Layout {
    pub fn new(m: &CrossedModule) -> Layout {
        let ng = m.group().order();
        let nx = m.space().order();
        let n_omega = nx * nx * nx;
        let n_gamma = ng * ng * nx;
        let n_mu = ng * nx * nx;
        let n_c = nx * nx;
        Layout {
            ng,
            nx,
            off_gamma: n_omega,
            off_mu: n_omega + n_gamma,
            off_c: n_omega + n_gamma + n_mu,
            total: n_omega + n_gamma + n_mu + n_c,
        }
    }

    #[inline]
    pub fn omega(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.nx + y) * self.nx + z
    }

    #[inline]
    pub fn gamma(&self, g: usize, h: usize, x: usize) -> usize {
        self.off_gamma + (g * self.ng + h) * self.nx + x
    }

    #[inline]
    pub fn mu(&self, g: usize, x: usize, y: usize) -> usize {
        self.off_mu + (g * self.nx + x) * self.nx + y
    }

    #[inline]
    pub fn c(&self, x: usize, y: usize) -> usize {
        self.off_c + x * self.nx + y
    }
}

/// A quasi-abelian 3-cocycle candidate `(omega, gamma, mu, c)` in exponent
/// form. Validity is checked by [`check_qa3`], not enforced on construction.
#[derive(Clone, Debug)]
pub struct QaCocycle {
    module: Arc<CrossedModule>,
    level: i64,
    exps: Vec<i64>,
}

impl QaCocycle {
    pub fn trivial(module: Arc<CrossedModule>, level: i64) -> Self {
        assert!(level >= 1);
        let layout = Layout::new(&module);
        QaCocycle {
            module,
            level,
            exps: vec![0; layout.total],
        }
    }

    pub(crate) fn from_exps(module: Arc<CrossedModule>, level: i64, exps: Vec<i64>) -> Self {
        let layout = Layout::new(&module);
        assert_eq!(exps.len(), layout.total);
        QaCocycle {
            module,
            level,
            exps: exps.into_iter().map(|e| e.rem_euclid(level)).collect(),
        }
    }

    /// Builds from sparse entries; unspecified entries are exponent 0.
    pub fn from_entries(
        module: Arc<CrossedModule>,
        level: i64,
        omega: &[([usize; 3], i64)],
        gamma: &[([usize; 3], i64)],
        mu: &[([usize; 3], i64)],
        c: &[([usize; 2], i64)],
    ) -> Result<Self, CocycleError> {
        if level < 1 {
            return Err(CocycleError::BadEntry(format!("level {level} < 1")));
        }
        let layout = Layout::new(&module);
        let (ng, nx) = (layout.ng, layout.nx);
        let mut exps = vec![0i64; layout.total];
        let check = |v: usize, bound: usize, what: &str| -> Result<(), CocycleError> {
            if v >= bound {
                Err(CocycleError::BadEntry(format!(
                    "{what} argument {v} out of range (bound {bound})"
                )))
            } else {
                Ok(())
            }
        };
        for &([x, y, z], e) in omega {
            check(x, nx, "omega")?;
            check(y, nx, "omega")?;
            check(z, nx, "omega")?;
            exps[layout.omega(x, y, z)] = e.rem_euclid(level);
        }
        for &([g, h, x], e) in gamma {
            check(g, ng, "gamma")?;
            check(h, ng, "gamma")?;
            check(x, nx, "gamma")?;
            exps[layout.gamma(g, h, x)] = e.rem_euclid(level);
        }
        for &([g, x, y], e) in mu {
            check(g, ng, "mu")?;
            check(x, nx, "mu")?;
            check(y, nx, "mu")?;
            exps[layout.mu(g, x, y)] = e.rem_euclid(level);
        }
        for &([x, y], e) in c {
            check(x, nx, "c")?;
            check(y, nx, "c")?;
            exps[layout.c(x, y)] = e.rem_euclid(level);
        }
        Ok(QaCocycle {
            module,
            level,
            exps,
        })
    }

    pub fn module(&self) -> &Arc<CrossedModule> {
        &self.module
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub(crate) fn layout(&self) -> Layout {
        Layout::new(&self.module)
    }

    pub(crate) fn exps(&self) -> &[i64] {
        &self.exps
    }

    /// Exponent of `omega(x,y,z)`.
    #[inline]
    pub fn omega(&self, x: usize, y: usize, z: usize) -> i64 {
        self.exps[self.layout().omega(x, y, z)]
    }

    /// Exponent of `gamma_{g,h}(x)`.
    #[inline]
    pub fn gamma(&self, g: usize, h: usize, x: usize) -> i64 {
        self.exps[self.layout().gamma(g, h, x)]
    }

    /// Exponent of `mu_g(x,y)`.
    #[inline]
    pub fn mu(&self, g: usize, x: usize, y: usize) -> i64 {
        self.exps[self.layout().mu(g, x, y)]
    }

    /// Exponent of `c(x,y)`.
    #[inline]
    pub fn c(&self, x: usize, y: usize) -> i64 {
        self.exps[self.layout().c(x, y)]
    }

    pub fn omega_scalar(&self, x: usize, y: usize, z: usize) -> ScalarExp {
        ScalarExp::new(self.omega(x, y, z), self.level)
    }

    pub fn c_scalar(&self, x: usize, y: usize) -> ScalarExp {
        ScalarExp::new(self.c(x, y), self.level)
    }

    fn compatible(&self, other: &QaCocycle) -> Result<(), CocycleError> {
        if self.level != other.level {
            return Err(CocycleError::LevelMismatch(self.level, other.level));
        }
        if !Arc::ptr_eq(&self.module, &other.module) && self.module != other.module {
            return Err(CocycleError::ModuleMismatch);
        }
        Ok(())
    }

    /// Pointwise product (exponent sum).
    pub fn product(&self, other: &QaCocycle) -> Result<QaCocycle, CocycleError> {
        self.compatible(other)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| (a + b).rem_euclid(self.level))
            .collect();
        Ok(QaCocycle {
            module: Arc::clone(&self.module),
            level: self.level,
            exps,
        })
    }

    /// Pointwise inverse (exponent negation).
    pub fn inverse(&self) -> QaCocycle {
        QaCocycle {
            module: Arc::clone(&self.module),
            level: self.level,
            exps: self.exps.iter().map(|e| (-e).rem_euclid(self.level)).collect(),
        }
    }

    /// `self / other` pointwise.
    pub fn ratio(&self, other: &QaCocycle) -> Result<QaCocycle, CocycleError> {
        self.product(&other.inverse())
    }

    /// All identity-argument entries are exponent 0.
    pub fn is_normalized(&self) -> bool {
        let layout = self.layout();
        identity_positions(&self.module, &layout)
            .into_iter()
            .all(|i| self.exps[i] == 0)
    }
}

/// Which of the defining conditions a row or witness belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `omega` is a 3-cocycle on `X`
    A,
    /// `gamma` is a 2-cocycle on `G` valued in maps on `X`
    B,
    /// `d(mu_g) = omega^g / omega`
    C,
    /// `d(gamma_{g,h}) = (d mu)_{g,h}`
    D,
    /// braiding transforms correctly under the action
    E,
    /// product rule for the braiding in the first slot
    F,
    /// product rule for the braiding in the second slot
    G,
}

impl Condition {
    pub fn label(&self) -> &'static str {
        match self {
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
            Condition::D => "d",
            Condition::E => "e",
            Condition::F => "f",
            Condition::G => "g",
        }
    }

    pub const ALL: [Condition; 7] = [
        Condition::A,
        Condition::B,
        Condition::C,
        Condition::D,
        Condition::E,
        Condition::F,
        Condition::G,
    ];
}

/// Per-condition outcome with the lexicographically first failing tuple.
#[derive(Clone, Debug)]
pub struct ConditionResult {
    pub condition: Condition,
    pub ok: bool,
    pub witness: Option<Vec<usize>>,
}

/// Outcome of [`check_qa3`].
#[derive(Clone, Debug)]
pub struct CocycleReport {
    pub conditions: Vec<ConditionResult>,
}

impl CocycleReport {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.ok)
    }
}

/// Enumerates every instance of one condition as a sparse linear form over
/// the cocycle variables; the form must vanish mod `N`.
fn for_each_condition_row(
    m: &CrossedModule,
    layout: &Layout,
    cond: Condition,
    mut emit: impl FnMut(&[usize], &[(usize, i64)]),
) {
    let ng = layout.ng;
    let nx = layout.nx;
    let gg = m.group();
    let xg = m.space();
    let mut row: Vec<(usize, i64)> = Vec::with_capacity(8);
    match cond {
        Condition::A => {
            for w in 0..nx {
                for x in 0..nx {
                    for y in 0..nx {
                        for z in 0..nx {
                            row.clear();
                            row.push((layout.omega(x, y, z), 1));
                            row.push((layout.omega(w, xg.mul(x, y), z), 1));
                            row.push((layout.omega(w, x, y), 1));
                            row.push((layout.omega(xg.mul(w, x), y, z), -1));
                            row.push((layout.omega(w, x, xg.mul(y, z)), -1));
                            emit(&[w, x, y, z], &row);
                        }
                    }
                }
            }
        }
        Condition::B => {
            for g in 0..ng {
                for h in 0..ng {
                    for k in 0..ng {
                        for x in 0..nx {
                            row.clear();
                            row.push((layout.gamma(h, k, x), 1));
                            row.push((layout.gamma(g, gg.mul(h, k), x), 1));
                            row.push((layout.gamma(gg.mul(g, h), k, x), -1));
                            row.push((layout.gamma(g, h, m.act(k, x)), -1));
                            emit(&[g, h, k, x], &row);
                        }
                    }
                }
            }
        }
        Condition::C => {
            for g in 0..ng {
                for x in 0..nx {
                    for y in 0..nx {
                        for z in 0..nx {
                            row.clear();
                            row.push((layout.mu(g, y, z), 1));
                            row.push((layout.mu(g, x, xg.mul(y, z)), 1));
                            row.push((layout.mu(g, xg.mul(x, y), z), -1));
                            row.push((layout.mu(g, x, y), -1));
                            row.push((layout.omega(m.act(g, x), m.act(g, y), m.act(g, z)), -1));
                            row.push((layout.omega(x, y, z), 1));
                            emit(&[g, x, y, z], &row);
                        }
                    }
                }
            }
        }
        Condition::D => {
            for g in 0..ng {
                for h in 0..ng {
                    for x in 0..nx {
                        for y in 0..nx {
                            row.clear();
                            row.push((layout.gamma(g, h, x), 1));
                            row.push((layout.gamma(g, h, y), 1));
                            row.push((layout.gamma(g, h, xg.mul(x, y)), -1));
                            row.push((layout.mu(g, m.act(h, x), m.act(h, y)), -1));
                            row.push((layout.mu(h, x, y), -1));
                            row.push((layout.mu(gg.mul(g, h), x, y), 1));
                            emit(&[g, h, x, y], &row);
                        }
                    }
                }
            }
        }
        Condition::E => {
            for g in 0..ng {
                for x in 0..nx {
                    for y in 0..nx {
                        row.clear();
                        let dx = m.boundary(x);
                        row.push((layout.c(m.act(g, x), m.act(g, y)), 1));
                        row.push((layout.c(x, y), -1));
                        row.push((layout.mu(g, xg.conj(x, y), x), -1));
                        row.push((layout.mu(g, x, y), 1));
                        row.push((layout.gamma(gg.conj(g, dx), g, y), -1));
                        row.push((layout.gamma(g, dx, y), 1));
                        emit(&[g, x, y], &row);
                    }
                }
            }
        }
        Condition::F => {
            for x in 0..nx {
                for y in 0..nx {
                    for z in 0..nx {
                        row.clear();
                        let xy = xg.mul(x, y);
                        row.push((layout.c(xy, z), 1));
                        row.push((layout.omega(x, y, z), -1));
                        row.push((layout.omega(xg.conj(xy, z), x, y), -1));
                        row.push((layout.omega(x, xg.conj(y, z), y), 1));
                        row.push((layout.gamma(m.boundary(x), m.boundary(y), z), 1));
                        row.push((layout.c(x, xg.conj(y, z)), -1));
                        row.push((layout.c(y, z), -1));
                        emit(&[x, y, z], &row);
                    }
                }
            }
        }
        Condition::G => {
            for x in 0..nx {
                for y in 0..nx {
                    for z in 0..nx {
                        row.clear();
                        row.push((layout.c(x, xg.mul(y, z)), 1));
                        row.push((layout.omega(xg.conj(x, y), x, z), -1));
                        row.push((layout.omega(x, y, z), 1));
                        row.push((layout.omega(xg.conj(x, y), xg.conj(x, z), x), 1));
                        row.push((layout.mu(m.boundary(x), y, z), 1));
                        row.push((layout.c(x, y), -1));
                        row.push((layout.c(x, z), -1));
                        emit(&[x, y, z], &row);
                    }
                }
            }
        }
    }
}

/// Checks conditions (a)-(g) by exhaustive evaluation; exact.
pub fn check_qa3(xi: &QaCocycle) -> CocycleReport {
    let layout = xi.layout();
    let n = xi.level;
    let mut conditions = Vec::with_capacity(7);
    for cond in Condition::ALL {
        let mut witness: Option<Vec<usize>> = None;
        for_each_condition_row(&xi.module, &layout, cond, |tuple, row| {
            if witness.is_some() {
                return;
            }
            let sum: i64 = row
                .iter()
                .map(|&(var, coef)| coef * xi.exps[var])
                .sum::<i64>()
                .rem_euclid(n);
            if sum != 0 {
                witness = Some(tuple.to_vec());
            }
        });
        conditions.push(ConditionResult {
            condition: cond,
            ok: witness.is_none(),
            witness,
        });
    }
    CocycleReport { conditions }
}

/// A coboundary datum: a 2-cochain `eta` on `X` and a map `beta` from `G`
/// to 1-cochains on `X`.
#[derive(Clone, Debug)]
pub struct CoboundaryData {
    pub eta: Vec<i64>,
    pub beta: Vec<i64>,
    pub level: i64,
}

impl CoboundaryData {
    pub fn zero(m: &CrossedModule, level: i64) -> Self {
        let nx = m.space().order();
        let ng = m.group().order();
        CoboundaryData {
            eta: vec![0; nx * nx],
            beta: vec![0; ng * nx],
            level,
        }
    }

    pub fn random(m: &CrossedModule, level: i64, rng: &mut impl Rng) -> Self {
        let nx = m.space().order();
        let ng = m.group().order();
        CoboundaryData {
            eta: (0..nx * nx).map(|_| rng.random_range(0..level)).collect(),
            beta: (0..ng * nx).map(|_| rng.random_range(0..level)).collect(),
            level,
        }
    }

    #[inline]
    fn eta_at(&self, nx: usize, x: usize, y: usize) -> i64 {
        self.eta[x * nx + y]
    }

    #[inline]
    fn beta_at(&self, nx: usize, g: usize, x: usize) -> i64 {
        self.beta[g * nx + x]
    }
}

/// The coboundary quadruple of `(eta, beta)`:
/// `(d eta, d beta, g -> d(beta_g) * eta^g / eta,
///   (x,y) -> beta_{d(x)}(y) * eta(xyx^{-1},x) / eta(x,y))`.
pub fn coboundary(module: &Arc<CrossedModule>, data: &CoboundaryData) -> QaCocycle {
    let layout = Layout::new(module);
    let n = data.level;
    let nx = layout.nx;
    let xg = module.space();
    let mut exps = vec![0i64; layout.total];
    for x in 0..nx {
        for y in 0..nx {
            for z in 0..nx {
                exps[layout.omega(x, y, z)] = (data.eta_at(nx, y, z)
                    + data.eta_at(nx, x, xg.mul(y, z))
                    - data.eta_at(nx, xg.mul(x, y), z)
                    - data.eta_at(nx, x, y))
                .rem_euclid(n);
            }
        }
    }
    for g in 0..layout.ng {
        for h in 0..layout.ng {
            for x in 0..nx {
                exps[layout.gamma(g, h, x)] = (data.beta_at(nx, g, module.act(h, x))
                    + data.beta_at(nx, h, x)
                    - data.beta_at(nx, module.group().mul(g, h), x))
                .rem_euclid(n);
            }
        }
    }
    for g in 0..layout.ng {
        for x in 0..nx {
            for y in 0..nx {
                exps[layout.mu(g, x, y)] = (data.beta_at(nx, g, x) + data.beta_at(nx, g, y)
                    - data.beta_at(nx, g, xg.mul(x, y))
                    + data.eta_at(nx, module.act(g, x), module.act(g, y))
                    - data.eta_at(nx, x, y))
                .rem_euclid(n);
            }
        }
    }
    for x in 0..nx {
        for y in 0..nx {
            exps[layout.c(x, y)] = (data.beta_at(nx, module.boundary(x), y)
                + data.eta_at(nx, xg.conj(x, y), x)
                - data.eta_at(nx, x, y))
            .rem_euclid(n);
        }
    }
    QaCocycle {
        module: Arc::clone(module),
        level: n,
        exps,
    }
}

/// Matrix of the coboundary map `(eta, beta) -> quadruple`, columns indexed
/// by `[eta | beta]`.
fn coboundary_matrix(module: &CrossedModule, layout: &Layout) -> MatZ {
    let nx = layout.nx;
    let ng = layout.ng;
    let cols = nx * nx + ng * nx;
    let eta = |x: usize, y: usize| x * nx + y;
    let beta = |g: usize, x: usize| nx * nx + g * nx + x;
    let xg = module.space();
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); layout.total];
    for x in 0..nx {
        for y in 0..nx {
            for z in 0..nx {
                rows[layout.omega(x, y, z)] = vec![
                    (eta(y, z), 1),
                    (eta(x, xg.mul(y, z)), 1),
                    (eta(xg.mul(x, y), z), -1),
                    (eta(x, y), -1),
                ];
            }
        }
    }
    for g in 0..ng {
        for h in 0..ng {
            for x in 0..nx {
                rows[layout.gamma(g, h, x)] = vec![
                    (beta(g, module.act(h, x)), 1),
                    (beta(h, x), 1),
                    (beta(module.group().mul(g, h), x), -1),
                ];
            }
        }
    }
    for g in 0..ng {
        for x in 0..nx {
            for y in 0..nx {
                rows[layout.mu(g, x, y)] = vec![
                    (beta(g, x), 1),
                    (beta(g, y), 1),
                    (beta(g, xg.mul(x, y)), -1),
                    (eta(module.act(g, x), module.act(g, y)), 1),
                    (eta(x, y), -1),
                ];
            }
        }
    }
    for x in 0..nx {
        for y in 0..nx {
            rows[layout.c(x, y)] = vec![
                (beta(module.boundary(x), y), 1),
                (eta(xg.conj(x, y), x), 1),
                (eta(x, y), -1),
            ];
        }
    }
    MatZ::from_sparse_rows(&rows, cols)
}

/// If `xi` is a coboundary, returns a witness `(eta, beta)`.
pub fn is_coboundary(xi: &QaCocycle) -> Option<CoboundaryData> {
    let layout = xi.layout();
    let d = coboundary_matrix(&xi.module, &layout);
    let sol = snf::solve_mod(&d, &xi.exps, xi.level)?;
    let nx = layout.nx;
    Some(CoboundaryData {
        eta: sol[..nx * nx].to_vec(),
        beta: sol[nx * nx..].to_vec(),
        level: xi.level,
    })
}

/// Variable indices whose defining tuple involves an identity argument.
fn identity_positions(module: &CrossedModule, layout: &Layout) -> Vec<usize> {
    let ex = module.space().identity();
    let eg = module.group().identity();
    let nx = layout.nx;
    let ng = layout.ng;
    let mut out = Vec::new();
    for x in 0..nx {
        for y in 0..nx {
            for z in 0..nx {
                if x == ex || y == ex || z == ex {
                    out.push(layout.omega(x, y, z));
                }
            }
        }
    }
    for g in 0..ng {
        for h in 0..ng {
            for x in 0..nx {
                if g == eg || h == eg || x == ex {
                    out.push(layout.gamma(g, h, x));
                }
            }
        }
    }
    for g in 0..ng {
        for x in 0..nx {
            for y in 0..nx {
                if g == eg || x == ex || y == ex {
                    out.push(layout.mu(g, x, y));
                }
            }
        }
    }
    for x in 0..nx {
        for y in 0..nx {
            if x == ex || y == ex {
                out.push(layout.c(x, y));
            }
        }
    }
    out
}

/// Divides out a coboundary that kills every identity-argument entry.
/// Returns the normalized cocycle and the coboundary datum used.
pub fn normalize(xi: &QaCocycle) -> Result<(QaCocycle, CoboundaryData), CocycleError> {
    let layout = xi.layout();
    let positions = identity_positions(&xi.module, &layout);
    if positions.iter().all(|&i| xi.exps[i] == 0) {
        let d = CoboundaryData::zero(&xi.module, xi.level);
        return Ok((xi.clone(), d));
    }
    let dmat = coboundary_matrix(&xi.module, &layout);
    let rows: Vec<Vec<i64>> = positions
        .iter()
        .map(|&i| (0..dmat.cols).map(|j| dmat.get(i, j)).collect())
        .collect();
    let restricted = MatZ::from_rows(rows);
    let rhs: Vec<i64> = positions.iter().map(|&i| xi.exps[i]).collect();
    let sol = snf::solve_mod(&restricted, &rhs, xi.level)
        .ok_or(CocycleError::NormalizationInfeasible)?;
    let nx = layout.nx;
    let data = CoboundaryData {
        eta: sol[..nx * nx].to_vec(),
        beta: sol[nx * nx..].to_vec(),
        level: xi.level,
    };
    let normalized = xi.ratio(&coboundary(&xi.module, &data))?;
    debug_assert!(normalized.is_normalized());
    Ok((normalized, data))
}

/// The quasi-abelian third cohomology group at level `N`, described by its
/// invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyGroup {
    /// Ascending divisor chain, trivial factors omitted; each divides `N`.
    pub factors: Vec<i64>,
    pub order: u64,
}

/// Orders of the cocycle and coboundary groups as factor lists, exposed for
/// cross-checking `|Z| / |B| = |H|`.
#[derive(Clone, Debug)]
pub struct H3Detail {
    pub group: CohomologyGroup,
    pub cocycle_order_factors: Vec<i64>,
    pub coboundary_order_factors: Vec<i64>,
}

fn guard_size(layout: &Layout, cap: usize) -> Result<(), CocycleError> {
    if layout.total > cap {
        Err(CocycleError::SizeLimit(layout.total, cap))
    } else {
        Ok(())
    }
}

fn condition_matrix(module: &CrossedModule, layout: &Layout) -> MatZ {
    let mut rows: Vec<Vec<(usize, i64)>> = Vec::new();
    for cond in Condition::ALL {
        for_each_condition_row(module, layout, cond, |_, row| {
            rows.push(row.to_vec());
        });
    }
    // merge duplicate columns within each row, drop zero rows, dedupe rows
    // up to sign, and put sparse rows first: all of this speeds up the
    // Smith pass without changing the kernel
    let mut canon: Vec<Vec<(usize, i64)>> = Vec::with_capacity(rows.len());
    for row in rows {
        let mut m = std::collections::BTreeMap::new();
        for (j, v) in row {
            *m.entry(j).or_insert(0i64) += v;
        }
        m.retain(|_, v| *v != 0);
        if m.is_empty() {
            continue;
        }
        let mut r: Vec<(usize, i64)> = m.into_iter().collect();
        if r[0].1 < 0 {
            for e in &mut r {
                e.1 = -e.1;
            }
        }
        canon.push(r);
    }
    canon.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    canon.dedup();
    MatZ::from_sparse_rows(&canon, layout.total)
}

/// A generating set of the group of quasi-abelian 3-cocycles at level `N`.
pub fn cocycle_basis(
    module: &Arc<CrossedModule>,
    level: i64,
    cap: usize,
) -> Result<Vec<QaCocycle>, CocycleError> {
    let layout = Layout::new(module);
    guard_size(&layout, cap)?;
    let c = condition_matrix(module, &layout);
    let kernel = snf::kernel_mod(&c, level);
    Ok(kernel
        .basis
        .into_iter()
        .map(|v| QaCocycle::from_exps(Arc::clone(module), level, v))
        .collect())
}

/// Computes `H^3_qa` at level `N` together with the orders of the cocycle
/// and coboundary groups.
pub fn h3qa_detail(
    module: &Arc<CrossedModule>,
    level: i64,
    cap: usize,
) -> Result<H3Detail, CocycleError> {
    let layout = Layout::new(module);
    guard_size(&layout, cap)?;
    let cmat = condition_matrix(module, &layout);
    let kernel = snf::kernel_mod(&cmat, level);
    let dmat = coboundary_matrix(module, &layout);
    let b_factors = snf::image_order_factors(&dmat, level);

    // relations among the kernel generators: a is a relation iff
    // Z a ∈ image(D), i.e. (a, w) lies in the kernel of [Z | D]
    let s = kernel.basis.len();
    let group = if s == 0 {
        CohomologyGroup {
            factors: Vec::new(),
            order: 1,
        }
    } else {
        let m = dmat.cols;
        let mut stacked = MatZ::zeros(layout.total, s + m);
        for (j, vec) in kernel.basis.iter().enumerate() {
            for i in 0..layout.total {
                stacked.set(i, j, vec[i]);
            }
        }
        for i in 0..layout.total {
            for j in 0..m {
                stacked.set(i, s + j, dmat.get(i, j));
            }
        }
        let rel_kernel = snf::kernel_mod(&stacked, level);
        let rel_rows: Vec<Vec<i64>> = rel_kernel
            .basis
            .iter()
            .map(|v| v[..s].to_vec())
            .collect();
        // present the quotient on the kernel generators: columns = relations
        let mut rel = MatZ::zeros(s, rel_rows.len());
        for (j, r) in rel_rows.iter().enumerate() {
            for i in 0..s {
                rel.set(i, j, r[i]);
            }
        }
        let factors = snf::quotient_invariant_factors(&rel, level);
        let order = factors.iter().map(|&f| f as u64).product();
        CohomologyGroup { factors, order }
    };
    Ok(H3Detail {
        group,
        cocycle_order_factors: kernel.order_factors,
        coboundary_order_factors: b_factors,
    })
}

/// The quasi-abelian third cohomology group at level `N`.
pub fn h3qa(
    module: &Arc<CrossedModule>,
    level: i64,
    cap: usize,
) -> Result<CohomologyGroup, CocycleError> {
    Ok(h3qa_detail(module, level, cap)?.group)
}

/// Nondegeneracy of a normalized cocycle: the symmetric bicharacter
/// `B(x,y) = c(x,y) c(y,x)` on `Ker d` has trivial radical.
pub fn is_nondegenerate(xi: &QaCocycle) -> Result<bool, CocycleError> {
    if !xi.is_normalized() {
        return Err(CocycleError::NotNormalized);
    }
    let ker = xi.module.ker_boundary()?;
    let n = xi.level;
    let b = |x: usize, y: usize| (xi.c(x, y) + xi.c(y, x)).rem_euclid(n);
    // bicharacter property is a consequence of (f) and (g) on Ker d
    let xg = xi.module.space();
    for &x in &ker {
        for &y in &ker {
            for &z in &ker {
                let lhs = b(xg.mul(x, y), z);
                if lhs != (b(x, z) + b(y, z)).rem_euclid(n) {
                    return Err(CocycleError::BilinearityFailure);
                }
            }
        }
    }
    let ex = xg.identity();
    Ok(ker
        .iter()
        .filter(|&&x| x != ex)
        .all(|&x| ker.iter().any(|&y| b(x, y) != 0)))
}

/// Checks the ordinary 3-cocycle identity for `omega` on a group, given as
/// exponents mod `level` indexed by `(x*n + y)*n + z`.
fn group_cocycle_witness(g: &FiniteGroup, omega: &[i64], level: i64) -> Option<[usize; 4]> {
    let n = g.order();
    let idx = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let sum = omega[idx(x, y, z)] + omega[idx(w, g.mul(x, y), z)]
                        + omega[idx(w, x, y)]
                        - omega[idx(g.mul(w, x), y, z)]
                        - omega[idx(w, x, g.mul(y, z))];
                    if sum.rem_euclid(level) != 0 {
                        return Some([w, x, y, z]);
                    }
                }
            }
        }
    }
    None
}

fn group_cocycle_normalized(g: &FiniteGroup, omega: &[i64], level: i64) -> bool {
    let n = g.order();
    let e = g.identity();
    let idx = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    for x in 0..n {
        for y in 0..n {
            if omega[idx(e, x, y)].rem_euclid(level) != 0
                || omega[idx(x, e, y)].rem_euclid(level) != 0
                || omega[idx(x, y, e)].rem_euclid(level) != 0
            {
                return false;
            }
        }
    }
    true
}

/// Turns a normalized group 3-cocycle into a quasi-abelian 3-cocycle
/// `(omega, gamma, mu, 1)` on the conjugation crossed module `(G, G, id)`:
///
/// `gamma_{g,h}(x) = omega(g,h,x) omega(ghxh^{-1}g^{-1},g,h) / omega(g,hxh^{-1},h)`
/// `mu_g(x,y) = omega(gxg^{-1},g,y) / (omega(gxg^{-1},gyg^{-1},g) omega(g,x,y))`
pub fn from_group_3cocycle(
    g: &Arc<FiniteGroup>,
    omega: &[i64],
    level: i64,
) -> Result<QaCocycle, CocycleError> {
    let n = g.order();
    if omega.len() != n * n * n {
        return Err(CocycleError::BadEntry(format!(
            "omega has {} entries for |G|^3 = {}",
            omega.len(),
            n * n * n
        )));
    }
    if let Some(w) = group_cocycle_witness(g, omega, level) {
        return Err(CocycleError::NotACocycle(format!(
            "d(omega) != 1 at {w:?}"
        )));
    }
    if !group_cocycle_normalized(g, omega, level) {
        return Err(CocycleError::NotACocycle(
            "omega is not normalized".into(),
        ));
    }
    let module = Arc::new(xmod::conjugation_module(g));
    let layout = Layout::new(&module);
    let idx = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    let mut exps = vec![0i64; layout.total];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                exps[layout.omega(x, y, z)] = omega[idx(x, y, z)].rem_euclid(level);
            }
        }
    }
    for gg in 0..n {
        for h in 0..n {
            for x in 0..n {
                let ghx = g.conj(gg, g.conj(h, x));
                exps[layout.gamma(gg, h, x)] = (omega[idx(gg, h, x)] + omega[idx(ghx, gg, h)]
                    - omega[idx(gg, g.conj(h, x), h)])
                .rem_euclid(level);
            }
        }
    }
    for gg in 0..n {
        for x in 0..n {
            for y in 0..n {
                let gx = g.conj(gg, x);
                let gy = g.conj(gg, y);
                exps[layout.mu(gg, x, y)] = (omega[idx(gx, gg, y)]
                    - omega[idx(gx, gy, gg)]
                    - omega[idx(gg, x, y)])
                .rem_euclid(level);
            }
        }
    }
    let xi = QaCocycle {
        module,
        level,
        exps,
    };
    debug_assert!(check_qa3(&xi).passes());
    Ok(xi)
}

/// The standard representative of the class `k` in the third cohomology of
/// the cyclic group of order `n`, as exponents mod `level` (requires
/// `n | level`): `omega(a,b,c) = zeta^(k (level/n) a floor((b+c)/n))`.
pub fn cyclic_3cocycle(n: usize, k: i64, level: i64) -> Result<Vec<i64>, CocycleError> {
    if n == 0 {
        return Err(CocycleError::BadEntry("cyclic order 0".into()));
    }
    if level % (n as i64) != 0 {
        return Err(CocycleError::NotACocycle(format!(
            "level {level} is not divisible by {n}"
        )));
    }
    let step = level / n as i64;
    let idx = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    let mut omega = vec![0i64; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let carry = ((b + c) / n) as i64;
                omega[idx(a, b, c)] = (k * step * a as i64 * carry).rem_euclid(level);
            }
        }
    }
    let g = FiniteGroup::cyclic(n);
    if let Some(w) = group_cocycle_witness(&g, &omega, level) {
        return Err(CocycleError::NotACocycle(format!(
            "internal: representative fails at {w:?}"
        )));
    }
    Ok(omega)
}

/// Embeds a quasi-abelian cocycle pair `(omega, c)` on a group into the
/// crossed-module theory: the quadruple `(omega, 1, 1, c)` on `(G, G, id)`.
pub fn from_ospel(
    g: &Arc<FiniteGroup>,
    omega: &[i64],
    c: &[i64],
    level: i64,
) -> Result<QaCocycle, CocycleError> {
    let n = g.order();
    if omega.len() != n * n * n || c.len() != n * n {
        return Err(CocycleError::BadEntry(
            "omega or c has the wrong number of entries".into(),
        ));
    }
    let module = Arc::new(xmod::conjugation_module(g));
    let layout = Layout::new(&module);
    let mut exps = vec![0i64; layout.total];
    let idx = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                exps[layout.omega(x, y, z)] = omega[idx(x, y, z)].rem_euclid(level);
            }
            exps[layout.c(x, y)] = c[x * n + y].rem_euclid(level);
        }
    }
    let xi = QaCocycle {
        module,
        level,
        exps,
    };
    let report = check_qa3(&xi);
    if !report.passes() {
        let bad = report.conditions.iter().find(|c| !c.ok).unwrap();
        return Err(CocycleError::NotACocycle(format!(
            "condition ({}) fails at {:?}",
            bad.condition.label(),
            bad.witness
        )));
    }
    Ok(xi)
}

/// A generating set of the group of ordinary 3-cocycles `Z^3(G, mu_N)`,
/// each as an exponent vector over `G^3`.
pub fn group_3cocycle_basis(
    g: &FiniteGroup,
    level: i64,
    cap: usize,
) -> Result<Vec<Vec<i64>>, CocycleError> {
    let n = g.order();
    let vars = n * n * n;
    if vars > cap {
        return Err(CocycleError::SizeLimit(vars, cap));
    }
    let idx = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    let mut rows = Vec::with_capacity(n * n * n * n);
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    rows.push(vec![
                        (idx(x, y, z), 1),
                        (idx(w, g.mul(x, y), z), 1),
                        (idx(w, x, y), 1),
                        (idx(g.mul(w, x), y, z), -1),
                        (idx(w, x, g.mul(y, z)), -1),
                    ]);
                }
            }
        }
    }
    let mat = MatZ::from_sparse_rows(&rows, vars);
    Ok(snf::kernel_mod(&mat, level).basis)
}

/// Divides an ordinary group 3-cocycle by a coboundary so that all
/// identity-argument entries vanish.
pub fn normalize_group_3cocycle(
    g: &FiniteGroup,
    omega: &[i64],
    level: i64,
) -> Result<Vec<i64>, CocycleError> {
    let n = g.order();
    if let Some(w) = group_cocycle_witness(g, omega, level) {
        return Err(CocycleError::NotACocycle(format!(
            "d(omega) != 1 at {w:?}"
        )));
    }
    let e = g.identity();
    let idx = |x: usize, y: usize, z: usize| (x * n + y) * n + z;
    let eta = |x: usize, y: usize| x * n + y;
    // (d eta)(x,y,z) = eta(y,z) + eta(x,yz) - eta(xy,z) - eta(x,y)
    let deta_row = |x: usize, y: usize, z: usize| {
        vec![
            (eta(y, z), 1i64),
            (eta(x, g.mul(y, z)), 1),
            (eta(g.mul(x, y), z), -1),
            (eta(x, y), -1),
        ]
    };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if x == e || y == e || z == e {
                    rows.push(deta_row(x, y, z));
                    rhs.push(omega[idx(x, y, z)].rem_euclid(level));
                }
            }
        }
    }
    let mat = MatZ::from_sparse_rows(&rows, n * n);
    let sol = snf::solve_mod(&mat, &rhs, level)
        .ok_or(CocycleError::NormalizationInfeasible)?;
    let mut out = vec![0i64; n * n * n];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let deta = sol[eta(y, z)] + sol[eta(x, g.mul(y, z))]
                    - sol[eta(g.mul(x, y), z)]
                    - sol[eta(x, y)];
                out[idx(x, y, z)] = (omega[idx(x, y, z)] - deta).rem_euclid(level);
            }
        }
    }
    debug_assert!(group_cocycle_normalized(g, &out, level));
    Ok(out)
}

/// Pullback of a cocycle along a crossed-module homomorphism
/// `hom: source -> target` (where `xi` lives on the target):
/// `(omega o F^3, gamma_{f,f} o F, mu_f o F^2, c o F^2)`.
pub fn pullback(
    xi: &QaCocycle,
    hom: &XModHom,
    source: &Arc<CrossedModule>,
) -> Result<QaCocycle, CocycleError> {
    if !hom.is_hom(source, &xi.module) {
        return Err(CocycleError::InvalidHom);
    }
    let src_layout = Layout::new(source);
    let mut exps = vec![0i64; src_layout.total];
    let f = &hom.f;
    let bf = &hom.big_f;
    for x in 0..src_layout.nx {
        for y in 0..src_layout.nx {
            for z in 0..src_layout.nx {
                exps[src_layout.omega(x, y, z)] = xi.omega(bf[x], bf[y], bf[z]);
            }
            exps[src_layout.c(x, y)] = xi.c(bf[x], bf[y]);
        }
    }
    for g in 0..src_layout.ng {
        for h in 0..src_layout.ng {
            for x in 0..src_layout.nx {
                exps[src_layout.gamma(g, h, x)] = xi.gamma(f[g], f[h], bf[x]);
            }
        }
    }
    for g in 0..src_layout.ng {
        for x in 0..src_layout.nx {
            for y in 0..src_layout.nx {
                exps[src_layout.mu(g, x, y)] = xi.mu(f[g], bf[x], bf[y]);
            }
        }
    }
    Ok(QaCocycle {
        module: Arc::clone(source),
        level: xi.level,
        exps,
    })
}

/// Decides whether two cocycles define equivalent crossed pointed
/// categories: searches for a crossed-module isomorphism under which the
/// pullback differs from `a` by a coboundary. Returns the first witness.
pub fn are_equivalent(
    a: &QaCocycle,
    b: &QaCocycle,
    aut_cap: u64,
) -> Result<Option<(XModHom, CoboundaryData)>, CocycleError> {
    if a.level != b.level {
        return Err(CocycleError::LevelMismatch(a.level, b.level));
    }
    let isos = xmod::isomorphisms(&a.module, &b.module, aut_cap)?;
    for iso in isos {
        let pulled = pullback(b, &iso, &a.module)?;
        let ratio = pulled.ratio(a)?;
        if let Some(d) = is_coboundary(&ratio) {
            return Ok(Some((iso, d)));
        }
    }
    Ok(None)
}

/// Axiom families of the associated crossed pointed category, evaluated as
/// scalar identities on homogeneous objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CategoryAxiom {
    /// pentagon for the associativity constraint of the underlying category
    Pentagon,
    /// coherence of the tensor structure on the action functor `T`
    ActionCoherence,
    /// each `T_g` is a tensor functor (its structure respects associators)
    FunctorTensor,
    /// the structure maps `T_{gh} -> T_g T_h` are monoidal
    MonoidalStructure,
    /// the braiding transforms correctly under the action (Def. axiom i)
    BraidEquivariance,
    /// braiding of a product in the first slot (Def. axiom ii)
    HexagonFirst,
    /// braiding of a product in the second slot (Def. axiom iii)
    HexagonSecond,
}

impl CategoryAxiom {
    pub fn label(&self) -> &'static str {
        match self {
            CategoryAxiom::Pentagon => "pentagon",
            CategoryAxiom::ActionCoherence => "action-coherence",
            CategoryAxiom::FunctorTensor => "functor-tensor",
            CategoryAxiom::MonoidalStructure => "monoidal-structure",
            CategoryAxiom::BraidEquivariance => "braid-equivariance",
            CategoryAxiom::HexagonFirst => "hexagon-first",
            CategoryAxiom::HexagonSecond => "hexagon-second",
        }
    }

    pub const ALL: [CategoryAxiom; 7] = [
        CategoryAxiom::Pentagon,
        CategoryAxiom::ActionCoherence,
        CategoryAxiom::FunctorTensor,
        CategoryAxiom::MonoidalStructure,
        CategoryAxiom::BraidEquivariance,
        CategoryAxiom::HexagonFirst,
        CategoryAxiom::HexagonSecond,
    ];
}

#[derive(Clone, Debug)]
pub struct CategoryAxiomResult {
    pub axiom: CategoryAxiom,
    pub ok: bool,
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct CategoryReport {
    pub axioms: Vec<CategoryAxiomResult>,
}

impl CategoryReport {
    pub fn passes(&self) -> bool {
        self.axioms.iter().all(|a| a.ok)
    }
}

/// Evaluates the crossed-category axioms on homogeneous objects. Every
/// structural morphism of the category built from `xi` is a root of unity
/// times a flip/identity, so each axiom is a closed scalar identity; the
/// degree bookkeeping goes through the boundary map and the action tables,
/// independently of the algebraic identities behind [`check_qa3`].
pub fn check_crossed_category_axioms(xi: &QaCocycle) -> CategoryReport {
    let m = &xi.module;
    let n = xi.level;
    let nx = m.space().order();
    let ng = m.group().order();
    let xg = m.space();
    let gg = m.group();
    let mut axioms = Vec::new();

    let eval = |axiom: CategoryAxiom| {
        let mut witness: Option<Vec<usize>> = None;
        match axiom {
            CategoryAxiom::Pentagon => {
                'outer: for u in 0..nx {
                    for v in 0..nx {
                        for w in 0..nx {
                            for t in 0..nx {
                                let lhs = xi.omega(u, v, xg.mul(w, t)) + xi.omega(xg.mul(u, v), w, t);
                                let rhs = xi.omega(v, w, t)
                                    + xi.omega(u, xg.mul(v, w), t)
                                    + xi.omega(u, v, w);
                                if (lhs - rhs).rem_euclid(n) != 0 {
                                    witness = Some(vec![u, v, w, t]);
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
            CategoryAxiom::ActionCoherence => {
                'outer: for g in 0..ng {
                    for h in 0..ng {
                        for k in 0..ng {
                            for x in 0..nx {
                                // T_{ghk} -> T_g T_{hk} -> T_g (T_h T_k)
                                let lhs = xi.gamma(g, gg.mul(h, k), x) + xi.gamma(h, k, x);
                                // T_{ghk} -> T_{gh} T_k -> (T_g T_h) T_k
                                let rhs = xi.gamma(gg.mul(g, h), k, x) + xi.gamma(g, h, m.act(k, x));
                                if (lhs - rhs).rem_euclid(n) != 0 {
                                    witness = Some(vec![g, h, k, x]);
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
            CategoryAxiom::FunctorTensor => {
                'outer: for g in 0..ng {
                    for u in 0..nx {
                        for v in 0..nx {
                            for w in 0..nx {
                                let lhs = xi.omega(m.act(g, u), m.act(g, v), m.act(g, w))
                                    + xi.mu(g, u, v)
                                    + xi.mu(g, xg.mul(u, v), w);
                                let rhs =
                                    xi.mu(g, v, w) + xi.mu(g, u, xg.mul(v, w)) + xi.omega(u, v, w);
                                if (lhs - rhs).rem_euclid(n) != 0 {
                                    witness = Some(vec![g, u, v, w]);
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
            CategoryAxiom::MonoidalStructure => {
                'outer: for g in 0..ng {
                    for h in 0..ng {
                        for x in 0..nx {
                            for y in 0..nx {
                                let lhs = xi.gamma(g, h, xg.mul(x, y))
                                    + xi.mu(h, x, y)
                                    + xi.mu(g, m.act(h, x), m.act(h, y));
                                let rhs =
                                    xi.mu(gg.mul(g, h), x, y) + xi.gamma(g, h, x) + xi.gamma(g, h, y);
                                if (lhs - rhs).rem_euclid(n) != 0 {
                                    witness = Some(vec![g, h, x, y]);
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
            CategoryAxiom::BraidEquivariance => {
                'outer: for g in 0..ng {
                    for x in 0..nx {
                        for y in 0..nx {
                            let h = m.boundary(x);
                            let lhs = xi.gamma(g, h, y) - xi.gamma(gg.conj(g, h), g, y)
                                + xi.c(m.act(g, x), m.act(g, y))
                                + xi.mu(g, x, y);
                            let rhs = xi.mu(g, m.act(h, y), x) + xi.c(x, y);
                            if (lhs - rhs).rem_euclid(n) != 0 {
                                witness = Some(vec![g, x, y]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            CategoryAxiom::HexagonFirst => {
                'outer: for x in 0..nx {
                    for y in 0..nx {
                        for z in 0..nx {
                            let g = m.boundary(x);
                            let h = m.boundary(y);
                            let gh = gg.mul(g, h);
                            let lhs = -xi.omega(m.act(gh, z), x, y)
                                + xi.gamma(g, h, z)
                                + xi.c(xg.mul(x, y), z)
                                - xi.omega(x, y, z);
                            let rhs = xi.c(x, m.act(h, z)) - xi.omega(x, m.act(h, z), y)
                                + xi.c(y, z);
                            if (lhs - rhs).rem_euclid(n) != 0 {
                                witness = Some(vec![x, y, z]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            CategoryAxiom::HexagonSecond => {
                'outer: for x in 0..nx {
                    for y in 0..nx {
                        for z in 0..nx {
                            let g = m.boundary(x);
                            let lhs = xi.omega(m.act(g, y), m.act(g, z), x)
                                + xi.mu(g, y, z)
                                + xi.c(x, xg.mul(y, z))
                                + xi.omega(x, y, z);
                            let rhs = xi.c(x, z) + xi.omega(m.act(g, y), x, z) + xi.c(x, y);
                            if (lhs - rhs).rem_euclid(n) != 0 {
                                witness = Some(vec![x, y, z]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        CategoryAxiomResult {
            axiom,
            ok: witness.is_none(),
            witness,
        }
    };

    for axiom in CategoryAxiom::ALL {
        axioms.push(eval(axiom));
    }
    CategoryReport { axioms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xmod::{conjugation_module, trivial_base_module};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z2_conj() -> Arc<CrossedModule> {
        Arc::new(conjugation_module(&Arc::new(FiniteGroup::cyclic(2))))
    }

    fn s3_conj() -> Arc<CrossedModule> {
        Arc::new(conjugation_module(&Arc::new(
            FiniteGroup::symmetric(3).unwrap(),
        )))
    }

    fn point_z2() -> Arc<CrossedModule> {
        Arc::new(trivial_base_module(&Arc::new(FiniteGroup::cyclic(2))).unwrap())
    }

    /// The semion quadruple on ({e}, Z2): omega(1,1,1) = -1, c(1,1) = i.
    fn semion() -> QaCocycle {
        QaCocycle::from_entries(point_z2(), 4, &[([1, 1, 1], 2)], &[], &[], &[([1, 1], 1)])
            .unwrap()
    }

    #[test]
    fn trivial_passes_everywhere() {
        for m in [z2_conj(), s3_conj(), point_z2()] {
            for level in [1, 2, 6] {
                let xi = QaCocycle::trivial(Arc::clone(&m), level);
                assert!(check_qa3(&xi).passes());
                assert!(xi.is_normalized());
            }
        }
    }

    #[test]
    fn bicharacter_candidate_on_z2_passes() {
        // c(x,y) = (-1)^{xy} with everything else trivial
        let xi = QaCocycle::from_entries(z2_conj(), 2, &[], &[], &[], &[([1, 1], 1)]).unwrap();
        assert!(check_qa3(&xi).passes());
    }

    #[test]
    fn fourth_root_braiding_alone_fails_condition_f() {
        let xi = QaCocycle::from_entries(z2_conj(), 4, &[], &[], &[], &[([1, 1], 1)]).unwrap();
        let report = check_qa3(&xi);
        assert!(!report.passes());
        let f = report
            .conditions
            .iter()
            .find(|c| c.condition == Condition::F)
            .unwrap();
        assert!(!f.ok);
        assert_eq!(f.witness.as_deref(), Some(&[1, 1, 1][..]));
    }

    #[test]
    fn semion_is_valid_normalized_nondegenerate() {
        let xi = semion();
        assert!(check_qa3(&xi).passes());
        assert!(xi.is_normalized());
        assert!(is_nondegenerate(&xi).unwrap());
    }

    #[test]
    fn toric_like_cocycle_is_degenerate() {
        let xi = QaCocycle::trivial(point_z2(), 4);
        assert!(!is_nondegenerate(&xi).unwrap());
    }

    #[test]
    fn nondegenerate_requires_normalized() {
        let m = point_z2();
        // gamma_{e,e}(x) = zeta is a valid but non-normalized cocycle
        // component only when matched by mu and c; use a raw non-normalized
        // quadruple instead: omega(e,e,e) stays 0 but c(e,1) = 1 breaks
        // normalization without being a cocycle; is_nondegenerate must
        // reject before checking anything else.
        let xi = QaCocycle::from_entries(m, 4, &[], &[], &[], &[([0, 1], 1)]).unwrap();
        assert!(matches!(
            is_nondegenerate(&xi),
            Err(CocycleError::NotNormalized)
        ));
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [z2_conj(), point_z2()] {
            for _ in 0..100 {
                let d = CoboundaryData::random(&m, 4, &mut rng);
                let xi = coboundary(&m, &d);
                assert!(check_qa3(&xi).passes());
            }
        }
    }

    #[test]
    fn coboundary_formula_instantiation() {
        // eta arbitrary, beta = 0 on ({e}, Z2): omega-part = d(eta),
        // c-part(x,y) = eta(xyx^{-1},x) - eta(x,y) = eta(y,x) - eta(x,y)
        let m = point_z2();
        let mut d = CoboundaryData::zero(&m, 4);
        d.eta = vec![1, 2, 3, 1]; // eta(0,0), eta(0,1), eta(1,0), eta(1,1)
        let xi = coboundary(&m, &d);
        for x in 0..2 {
            for y in 0..2 {
                let expect = (d.eta[y * 2 + x] - d.eta[x * 2 + y]).rem_euclid(4);
                assert_eq!(xi.c(x, y), expect);
            }
        }
        for x in 0..2usize {
            for y in 0..2usize {
                for z in 0..2usize {
                    let eta = |a: usize, b: usize| d.eta[a * 2 + b];
                    let expect = (eta(y, z) + eta(x, (y + z) % 2)
                        - eta((x + y) % 2, z)
                        - eta(x, y))
                    .rem_euclid(4);
                    assert_eq!(xi.omega(x, y, z), expect);
                }
            }
        }
    }

    #[test]
    fn coboundary_membership_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [z2_conj(), point_z2()] {
            for _ in 0..20 {
                let d = CoboundaryData::random(&m, 6, &mut rng);
                let xi = coboundary(&m, &d);
                let witness = is_coboundary(&xi).expect("coboundary must be recognized");
                let rebuilt = coboundary(&m, &witness);
                assert_eq!(rebuilt.exps(), xi.exps());
            }
        }
    }

    #[test]
    fn normalize_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for m in [z2_conj(), point_z2()] {
            let basis = cocycle_basis(&m, 4, DEFAULT_VAR_CAP).unwrap();
            for trial in 0..10 {
                // random valid cocycle
                let mut xi = QaCocycle::trivial(Arc::clone(&m), 4);
                for b in &basis {
                    let k = rng.random_range(0..4);
                    let mut scaled = b.clone();
                    scaled.exps = scaled.exps.iter().map(|e| (e * k).rem_euclid(4)).collect();
                    xi = xi.product(&scaled).unwrap();
                }
                assert!(check_qa3(&xi).passes(), "trial {trial}");
                let (norm, d) = normalize(&xi).unwrap();
                assert!(norm.is_normalized());
                assert!(check_qa3(&norm).passes());
                // ratio is the coboundary of d
                let ratio = xi.ratio(&norm).unwrap();
                assert_eq!(ratio.exps(), coboundary(&m, &d).exps());
            }
        }
    }

    #[test]
    fn normalize_of_normalized_is_identity() {
        let xi = semion();
        let (norm, d) = normalize(&xi).unwrap();
        assert_eq!(norm.exps(), xi.exps());
        assert!(d.eta.iter().all(|&e| e == 0));
        assert!(d.beta.iter().all(|&e| e == 0));
    }

    #[test]
    fn h3_of_trivial_module_is_trivial() {
        let m = Arc::new(conjugation_module(&Arc::new(FiniteGroup::trivial())));
        for level in [2, 4, 6] {
            let h = h3qa(&m, level, DEFAULT_VAR_CAP).unwrap();
            assert_eq!(h.order, 1);
            assert!(h.factors.is_empty());
        }
    }

    #[test]
    fn h3_of_point_z2_level4() {
        // quadratic forms on Z2 valued in mu_4: cyclic of order 4
        let h = h3qa(&point_z2(), 4, DEFAULT_VAR_CAP).unwrap();
        assert_eq!(h.factors, vec![4]);
        assert_eq!(h.order, 4);
    }

    #[test]
    fn h3_orders_are_consistent() {
        use num_bigint::BigUint;
        for (m, level) in [(z2_conj(), 4i64), (point_z2(), 4), (point_z2(), 6)] {
            let detail = h3qa_detail(&m, level, DEFAULT_VAR_CAP).unwrap();
            let z: BigUint = detail
                .cocycle_order_factors
                .iter()
                .map(|&f| BigUint::from(f as u64))
                .product();
            let b: BigUint = detail
                .coboundary_order_factors
                .iter()
                .map(|&f| BigUint::from(f as u64))
                .product();
            let h = BigUint::from(detail.group.order);
            assert_eq!(z, b * h, "module {m:?} at level {level}");
        }
    }

    #[test]
    fn cocycle_space_is_a_group() {
        let m = z2_conj();
        let basis = cocycle_basis(&m, 4, DEFAULT_VAR_CAP).unwrap();
        for a in &basis {
            assert!(check_qa3(a).passes());
            for b in &basis {
                assert!(check_qa3(&a.product(b).unwrap()).passes());
            }
            assert!(check_qa3(&a.inverse()).passes());
        }
    }

    #[test]
    fn from_group_3cocycle_z2() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let omega = cyclic_3cocycle(2, 1, 2).unwrap();
        // the nontrivial class: omega(1,1,1) = -1
        assert_eq!(omega[(1 * 2 + 1) * 2 + 1], 1);
        let xi = from_group_3cocycle(&g, &omega, 2).unwrap();
        assert!(check_qa3(&xi).passes());
        assert!(check_qa3(&xi.inverse()).passes());
        // trivial input gives the trivial quadruple
        let triv = from_group_3cocycle(&g, &cyclic_3cocycle(2, 0, 2).unwrap(), 2).unwrap();
        assert!(triv.exps().iter().all(|&e| e == 0));
    }

    #[test]
    fn cyclic_3cocycle_is_a_cocycle() {
        for (n, k, level) in [(2, 1, 2), (2, 1, 4), (3, 1, 3), (3, 2, 6), (4, 3, 8)] {
            let omega = cyclic_3cocycle(n, k, level).unwrap();
            let g = FiniteGroup::cyclic(n);
            assert!(group_cocycle_witness(&g, &omega, level).is_none());
            assert!(group_cocycle_normalized(&g, &omega, level));
        }
        assert!(matches!(
            cyclic_3cocycle(3, 1, 4),
            Err(CocycleError::NotACocycle(_))
        ));
    }

    #[test]
    fn ospel_embedding() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        // trivial pair embeds to the trivial quadruple
        let xi = from_ospel(&g, &[0; 8], &[0; 4], 2).unwrap();
        assert!(xi.exps().iter().all(|&e| e == 0));
        // the semion pair omega(1,1,1) = -1, c(1,1) = i at level 4
        let omega = cyclic_3cocycle(2, 1, 4).unwrap();
        let xi = from_ospel(&g, &omega, &[0, 0, 0, 1], 4).unwrap();
        assert!(check_qa3(&xi).passes());
        assert_eq!(xi.gamma(1, 1, 1), 0);
        assert_eq!(xi.mu(1, 1, 1), 0);
        // omega without a compatible c is rejected
        let err = from_ospel(&g, &omega, &[0; 4], 4);
        assert!(matches!(err, Err(CocycleError::NotACocycle(_))));
    }

    #[test]
    fn pullback_along_identity() {
        let xi = semion();
        let id = XModHom::identity(xi.module());
        let pulled = pullback(&xi, &id, xi.module()).unwrap();
        assert_eq!(pulled.exps(), xi.exps());
    }

    #[test]
    fn equivalence_roundtrip_and_separation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xi = semion();
        let d = CoboundaryData::random(&xi.module(), 4, &mut rng);
        let shifted = xi.product(&coboundary(xi.module(), &d)).unwrap();
        let witness = are_equivalent(&xi, &shifted, 1_000_000).unwrap();
        let (iso, _) = witness.expect("cocycle and its coboundary shift are equivalent");
        assert!(iso.f.iter().enumerate().all(|(i, &v)| i == v));

        // semion vs anti-semion: not equivalent
        let anti = QaCocycle::from_entries(
            Arc::clone(xi.module()),
            4,
            &[([1, 1, 1], 2)],
            &[],
            &[],
            &[([1, 1], 3)],
        )
        .unwrap();
        assert!(check_qa3(&anti).passes());
        assert!(are_equivalent(&xi, &anti, 1_000_000).unwrap().is_none());
    }

    #[test]
    fn category_checker_matches_qa3() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = z2_conj();
        let basis = cocycle_basis(&m, 4, DEFAULT_VAR_CAP).unwrap();
        let layout = Layout::new(&m);
        for _ in 0..100 {
            // random element of the cocycle group, sometimes perturbed
            let mut exps = vec![0i64; layout.total];
            for b in &basis {
                let k = rng.random_range(0..4);
                for (e, be) in exps.iter_mut().zip(b.exps()) {
                    *e = (*e + k * be).rem_euclid(4);
                }
            }
            if rng.random_range(0..2) == 1 {
                let i = rng.random_range(0..layout.total);
                exps[i] = (exps[i] + rng.random_range(1..4)).rem_euclid(4);
            }
            let xi = QaCocycle::from_exps(Arc::clone(&m), 4, exps);
            assert_eq!(check_qa3(&xi).passes(), check_crossed_category_axioms(&xi).passes());
        }
    }

    #[test]
    fn single_entry_perturbation_fails_both_checkers() {
        let xi = semion();
        let mut exps = xi.exps().to_vec();
        let layout = xi.layout();
        exps[layout.c(1, 1)] = (exps[layout.c(1, 1)] + 1).rem_euclid(4);
        let bad = QaCocycle::from_exps(Arc::clone(xi.module()), 4, exps);
        assert!(!check_qa3(&bad).passes());
        assert!(!check_crossed_category_axioms(&bad).passes());
    }

    #[test]
    fn size_cap_respected() {
        let m = s3_conj();
        assert!(matches!(
            h3qa(&m, 6, 10),
            Err(CocycleError::SizeLimit(_, 10))
        ));
    }

    #[test]
    fn level_mismatch_detected() {
        let a = QaCocycle::trivial(z2_conj(), 2);
        let b = QaCocycle::trivial(z2_conj(), 4);
        assert!(matches!(
            a.product(&b),
            Err(CocycleError::LevelMismatch(2, 4))
        ));
    }
}
