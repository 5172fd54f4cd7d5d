//! Smith-form linear algebra over `Z/N`.
//!
//! Every system in this crate is a Z-linear system taken mod a level `N`
//! (kernels of cocycle-condition matrices, membership in coboundary images,
//! feasibility of normalization). All of them reduce to a Smith-style
//! diagonalization by unimodular row/column operations. Because the inputs
//! and the answers only matter mod `N`, entries are reduced into `[0, N)`
//! after every operation; coefficients never grow and `i64` arithmetic with
//! `i128` intermediates is exact.

/// Dense integer matrix, row-major, entries kept in `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatZ {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<i64>,
}

impl MatZ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatZ {
            rows,
            cols,
            a: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut a = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            a.extend_from_slice(row);
        }
        MatZ { rows: r, cols: c, a }
    }

    /// Builds from sparse rows of `(column, coefficient)` pairs; repeated
    /// columns accumulate.
    pub fn from_sparse_rows(rows: &[Vec<(usize, i64)>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for &(j, v) in row {
                m.a[i * cols + j] += v;
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    fn reduce(&mut self, n: i64) {
        for v in &mut self.a {
            *v = v.rem_euclid(n);
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.a.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.a.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// rows (i1, i2) <- (s*i1 + t*i2, u*i1 + v*i2), reduced mod n.
    fn row_combine(&mut self, i1: usize, i2: usize, s: i64, t: i64, u: i64, v: i64, n: i64) {
        let c = self.cols;
        for k in 0..c {
            let x = self.a[i1 * c + k] as i128;
            let y = self.a[i2 * c + k] as i128;
            let nx = (s as i128 * x + t as i128 * y).rem_euclid(n as i128) as i64;
            let ny = (u as i128 * x + v as i128 * y).rem_euclid(n as i128) as i64;
            self.a[i1 * c + k] = nx;
            self.a[i2 * c + k] = ny;
        }
    }

    /// row i2 -= q * row i1, reduced mod n.
    fn row_subtract(&mut self, i1: usize, i2: usize, q: i64, n: i64) {
        let c = self.cols;
        for k in 0..c {
            let x = self.a[i1 * c + k] as i128;
            let y = self.a[i2 * c + k] as i128;
            self.a[i2 * c + k] = (y - q as i128 * x).rem_euclid(n as i128) as i64;
        }
    }

    fn col_combine(&mut self, j1: usize, j2: usize, s: i64, t: i64, u: i64, v: i64, n: i64) {
        let c = self.cols;
        for r in 0..self.rows {
            let x = self.a[r * c + j1] as i128;
            let y = self.a[r * c + j2] as i128;
            let nx = (s as i128 * x + t as i128 * y).rem_euclid(n as i128) as i64;
            let ny = (u as i128 * x + v as i128 * y).rem_euclid(n as i128) as i64;
            self.a[r * c + j1] = nx;
            self.a[r * c + j2] = ny;
        }
    }

    fn col_subtract(&mut self, j1: usize, j2: usize, q: i64, n: i64) {
        let c = self.cols;
        for r in 0..self.rows {
            let x = self.a[r * c + j1] as i128;
            let y = self.a[r * c + j2] as i128;
            self.a[r * c + j2] = (y - q as i128 * x).rem_euclid(n as i128) as i64;
        }
    }

    pub fn mul_vec_mod(&self, x: &[i64], n: i64) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc: i128 = 0;
                for j in 0..self.cols {
                    acc += self.get(i, j) as i128 * x[j] as i128;
                }
                acc.rem_euclid(n as i128) as i64
            })
            .collect()
    }
}

/// Balanced representative of `v mod n`, i.e. the one in `(-n/2, n/2]`.
#[inline]
fn balanced(v: i64, n: i64) -> i64 {
    if 2 * v > n {
        v - n
    } else {
        v
    }
}

/// Extended gcd: returns `(d, s, t)` with `s*x + t*y = d >= 0`.
pub fn gcdx(x: i64, y: i64) -> (i64, i64, i64) {
    if y == 0 {
        if x >= 0 {
            (x, 1, 0)
        } else {
            (-x, -1, 0)
        }
    } else {
        let (d, s, t) = gcdx(y, x % y);
        (d, t, s - (x / y) * t)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    gcdx(a, b).0
}

/// Diagonalization `U * A * V = D (mod n)` with `U`, `V` invertible mod `n`.
pub struct SmithMod {
    pub diag: Vec<i64>,
    pub u: Option<MatZ>,
    pub v: Option<MatZ>,
}

pub fn smith_mod(mut a: MatZ, n: i64, want_u: bool, want_v: bool) -> SmithMod {
    assert!(n >= 1);
    let rows = a.rows;
    let cols = a.cols;
    let mut u = want_u.then(|| MatZ::identity(rows));
    let mut v = want_v.then(|| MatZ::identity(cols));
    let rank_bound = rows.min(cols);
    if n == 1 {
        return SmithMod {
            diag: vec![0; rank_bound],
            u,
            v,
        };
    }
    a.reduce(n);

    for r in 0..rank_bound {
        let Some((pi, pj)) = find_pivot(&a, r, n) else {
            break;
        };
        a.swap_rows(r, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(r, pi);
        }
        a.swap_cols(r, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(r, pj);
        }

        loop {
            // clear column r
            for i in (r + 1)..rows {
                let y = a.get(i, r);
                if y == 0 {
                    continue;
                }
                let x = balanced(a.get(r, r), n);
                let yb = balanced(y, n);
                if x != 0 && yb % x == 0 {
                    let q = yb / x;
                    a.row_subtract(r, i, q, n);
                    if let Some(u) = u.as_mut() {
                        u.row_subtract(r, i, q, n);
                    }
                } else {
                    let (d, s, t) = gcdx(x, yb);
                    let (p, q) = (x / d, yb / d);
                    a.row_combine(r, i, s, t, -q, p, n);
                    if let Some(u) = u.as_mut() {
                        u.row_combine(r, i, s, t, -q, p, n);
                    }
                }
            }
            // clear row r
            for j in (r + 1)..cols {
                let y = a.get(r, j);
                if y == 0 {
                    continue;
                }
                let x = balanced(a.get(r, r), n);
                let yb = balanced(y, n);
                if x != 0 && yb % x == 0 {
                    let q = yb / x;
                    a.col_subtract(r, j, q, n);
                    if let Some(v) = v.as_mut() {
                        v.col_subtract(r, j, q, n);
                    }
                } else {
                    let (d, s, t) = gcdx(x, yb);
                    let (p, q) = (x / d, yb / d);
                    a.col_combine(r, j, s, t, -q, p, n);
                    if let Some(v) = v.as_mut() {
                        v.col_combine(r, j, s, t, -q, p, n);
                    }
                }
            }
            // column entries may have been reintroduced by 2x2 column ops
            let col_clean = ((r + 1)..rows).all(|i| a.get(i, r) == 0);
            let row_clean = ((r + 1)..cols).all(|j| a.get(r, j) == 0);
            if col_clean && row_clean {
                break;
            }
        }
    }

    let diag = (0..rank_bound).map(|i| a.get(i, i)).collect();
    SmithMod { diag, u, v }
}

fn find_pivot(a: &MatZ, r: usize, n: i64) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, i64)> = None;
    for i in r..a.rows {
        for j in r..a.cols {
            let val = a.get(i, j);
            if val == 0 {
                continue;
            }
            let m = balanced(val, n).abs();
            if m == 1 {
                return Some((i, j));
            }
            if best.map_or(true, |(_, _, b)| m < b) {
                best = Some((i, j, m));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Generators of `{ x : A x = 0 (mod n) }` as a subgroup of `(Z/n)^cols`.
pub struct KernelMod {
    /// Generating vectors (mod n); zero vectors are dropped.
    pub basis: Vec<Vec<i64>>,
    /// Per column `i` of the diagonalization, `gcd(d_i, n)`; the kernel has
    /// order equal to the product of these factors.
    pub order_factors: Vec<i64>,
}

pub fn kernel_mod(a: &MatZ, n: i64) -> KernelMod {
    assert!(n >= 1);
    let cols = a.cols;
    if n == 1 {
        return KernelMod {
            basis: Vec::new(),
            order_factors: vec![1; cols],
        };
    }
    let sm = smith_mod(a.clone(), n, false, true);
    let v = sm.v.unwrap();
    let mut basis = Vec::new();
    let mut order_factors = Vec::with_capacity(cols);
    for i in 0..cols {
        let d = sm.diag.get(i).copied().unwrap_or(0);
        let g = if d == 0 { n } else { gcd(d, n) };
        order_factors.push(g);
        let scale = n / g;
        if scale == n {
            continue; // the column is annihilated mod n
        }
        let veci: Vec<i64> = (0..cols)
            .map(|row| (v.get(row, i) as i128 * scale as i128).rem_euclid(n as i128) as i64)
            .collect();
        if veci.iter().any(|&x| x != 0) {
            basis.push(veci);
        }
    }
    KernelMod {
        basis,
        order_factors,
    }
}

/// One solution of `A x = b (mod n)`, if any.
pub fn solve_mod(a: &MatZ, b: &[i64], n: i64) -> Option<Vec<i64>> {
    assert!(n >= 1);
    assert_eq!(b.len(), a.rows);
    if n == 1 {
        return Some(vec![0; a.cols]);
    }
    let sm = smith_mod(a.clone(), n, true, true);
    let u = sm.u.unwrap();
    let v = sm.v.unwrap();
    let c = u.mul_vec_mod(&b.iter().map(|&x| x.rem_euclid(n)).collect::<Vec<_>>(), n);
    let mut y = vec![0i64; a.cols];
    for i in 0..a.rows {
        let d = if i < sm.diag.len() { sm.diag[i] } else { 0 };
        let rhs = c[i];
        let g = if d == 0 { n } else { gcd(d, n) };
        if rhs % g != 0 {
            return None;
        }
        if i < a.cols && g != n {
            let m = n / g;
            let dg = ((d / g) % m + m) % m;
            let inv = modinv(dg, m)?;
            y[i] = ((rhs / g) as i128 * inv as i128).rem_euclid(m as i128) as i64;
        }
    }
    Some(v.mul_vec_mod(&y, n))
}

fn modinv(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (d, s, _) = gcdx(a, m);
    if d != 1 {
        return None;
    }
    Some(s.rem_euclid(m))
}

/// Factors whose product is the order of the image of `A` in `(Z/n)^rows`.
pub fn image_order_factors(a: &MatZ, n: i64) -> Vec<i64> {
    assert!(n >= 1);
    if n == 1 {
        return vec![1];
    }
    let sm = smith_mod(a.clone(), n, false, false);
    sm.diag
        .iter()
        .map(|&d| {
            let g = if d == 0 { n } else { gcd(d, n) };
            n / g
        })
        .collect()
}

/// Invariant factors (ascending divisor chain, trivial factors dropped) of
/// the abelian group `(Z/n)^s / <columns of rel>`.
pub fn quotient_invariant_factors(rel: &MatZ, n: i64) -> Vec<i64> {
    assert!(n >= 1);
    let s = rel.rows;
    if n == 1 || s == 0 {
        return Vec::new();
    }
    // mod-n arithmetic already encodes the relations n*e_i
    let sm = smith_mod(rel.clone(), n, false, false);
    let gcds: Vec<i64> = (0..s)
        .map(|i| {
            let d = sm.diag.get(i).copied().unwrap_or(0);
            if d == 0 {
                n
            } else {
                gcd(d, n)
            }
        })
        .collect();
    assemble_divisor_chain(&gcds, n)
}

/// Rearranges a multiset of divisors of `n` into the canonical ascending
/// divisor chain of the direct sum of the corresponding cyclic groups.
pub fn assemble_divisor_chain(gcds: &[i64], n: i64) -> Vec<i64> {
    let primes = prime_factors(n);
    let s = gcds.len();
    let mut factors = vec![1i64; s];
    for &p in &primes {
        let mut vals: Vec<u32> = gcds
            .iter()
            .map(|&g| {
                let mut v = 0;
                let mut x = g;
                while x % p == 0 {
                    v += 1;
                    x /= p;
                }
                v
            })
            .collect();
        vals.sort_unstable();
        for (i, v) in vals.iter().enumerate() {
            factors[i] *= p.pow(*v);
        }
    }
    factors.retain(|&f| f > 1);
    factors
}

fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_kernel_order(a: &MatZ, n: i64) -> u64 {
        // enumerate (Z/n)^cols; only usable for tiny systems
        let cols = a.cols;
        let total = (n as u64).pow(cols as u32);
        let mut count = 0;
        for code in 0..total {
            let mut x = Vec::with_capacity(cols);
            let mut c = code;
            for _ in 0..cols {
                x.push((c % n as u64) as i64);
                c /= n as u64;
            }
            if a.mul_vec_mod(&x, n).iter().all(|&v| v == 0) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn gcdx_identity() {
        for x in -30i64..30 {
            for y in -30i64..30 {
                let (d, s, t) = gcdx(x, y);
                assert_eq!(s * x + t * y, d, "x={x} y={y}");
                assert!(d >= 0);
                if x != 0 || y != 0 {
                    assert_eq!(x % d.max(1), 0);
                    assert_eq!(y % d.max(1), 0);
                }
            }
        }
    }

    #[test]
    fn smith_diagonal_known() {
        // integer SNF of this matrix is diag(1,1,1,2,60); with a large level
        // the mod-n smith form must report the same divisors up to gcd.
        let a = MatZ::from_rows(vec![
            vec![-20, -7, -27, 2, 29],
            vec![17, 8, 14, -4, -10],
            vec![13, 8, 10, -4, -6],
            vec![-9, -2, -14, 0, 16],
            vec![5, 0, 5, -1, -4],
        ]);
        let n = 720720; // multiple of 60, far above all entries
        let sm = smith_mod(a.clone(), n, true, true);
        let mut gs: Vec<i64> = sm.diag.iter().map(|&d| gcd(d, n)).collect();
        gs.sort_unstable();
        assert_eq!(gs, vec![1, 1, 1, 2, 60]);

        // and U*A*V == D mod n
        let u = sm.u.unwrap();
        let v = sm.v.unwrap();
        for j in 0..a.cols {
            let av = a.mul_vec_mod(&v.column(j), n);
            let uav = u.mul_vec_mod(&av, n);
            for (i, &x) in uav.iter().enumerate() {
                let expect = if i == j { sm.diag[i].rem_euclid(n) } else { 0 };
                assert_eq!(x, expect, "at ({i},{j})");
            }
        }
    }

    #[test]
    fn kernel_simple_scaling() {
        // 2x = 0 mod 4 has kernel {0, 2}
        let a = MatZ::from_rows(vec![vec![2]]);
        let k = kernel_mod(&a, 4);
        assert_eq!(k.basis, vec![vec![2]]);
        assert_eq!(k.order_factors, vec![2]);
    }

    #[test]
    fn kernel_mixed_row() {
        // 2x + y = 0 mod 4: kernel generated by (1, 2), order 4
        let a = MatZ::from_rows(vec![vec![2, 1]]);
        let k = kernel_mod(&a, 4);
        let order: i64 = k.order_factors.iter().product();
        assert_eq!(order as u64, brute_kernel_order(&a, 4));
        for b in &k.basis {
            assert!(a.mul_vec_mod(b, 4).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn kernel_matches_bruteforce_orders() {
        let cases: Vec<(MatZ, i64)> = vec![
            (MatZ::from_rows(vec![vec![2, 1, 0], vec![0, 2, 2]]), 4),
            (MatZ::from_rows(vec![vec![3, 1, 2], vec![2, 0, 4]]), 6),
            (MatZ::from_rows(vec![vec![1, 2], vec![2, 4]]), 8),
            (MatZ::from_rows(vec![vec![0, 0], vec![0, 0]]), 5),
            (MatZ::from_rows(vec![vec![2, 3, 1]]), 12),
        ];
        for (a, n) in cases {
            let k = kernel_mod(&a, n);
            let order: i64 = k.order_factors.iter().product();
            assert_eq!(order as u64, brute_kernel_order(&a, n), "n={n}");
            for b in &k.basis {
                assert!(a.mul_vec_mod(b, n).iter().all(|&v| v == 0));
            }
            // generated subgroup has the asserted order
            let mut seen = std::collections::HashSet::new();
            let cols = a.cols;
            seen.insert(vec![0i64; cols]);
            let mut frontier: Vec<Vec<i64>> = vec![vec![0; cols]];
            while let Some(x) = frontier.pop() {
                for b in &k.basis {
                    let y: Vec<i64> = x.iter().zip(b).map(|(u, v)| (u + v) % n).collect();
                    if seen.insert(y.clone()) {
                        frontier.push(y);
                    }
                }
            }
            assert_eq!(seen.len() as i64, order);
        }
    }

    #[test]
    fn solve_roundtrip() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for case in 0..50 {
            let n = [2, 3, 4, 6, 8, 12][case % 6];
            let rows = 1 + case % 4;
            let cols = 1 + (case / 2) % 4;
            let a = MatZ {
                rows,
                cols,
                a: (0..rows * cols).map(|_| rng.random_range(0..n)).collect(),
            };
            let x0: Vec<i64> = (0..cols).map(|_| rng.random_range(0..n)).collect();
            let b = a.mul_vec_mod(&x0, n);
            let x = solve_mod(&a, &b, n).expect("constructed system must be solvable");
            assert_eq!(a.mul_vec_mod(&x, n), b);
        }
    }

    #[test]
    fn solve_detects_infeasible() {
        // 2x = 1 mod 4 has no solution
        let a = MatZ::from_rows(vec![vec![2]]);
        assert!(solve_mod(&a, &[1], 4).is_none());
        assert!(solve_mod(&a, &[2], 4).is_some());
    }

    #[test]
    fn image_orders() {
        // image of [2] in Z/4 is {0,2}: order 2
        let a = MatZ::from_rows(vec![vec![2]]);
        let f: i64 = image_order_factors(&a, 4).iter().product();
        assert_eq!(f, 2);
    }

    #[test]
    fn quotient_factors() {
        // Z/4 x Z/4 modulo <(2,0)> = Z/2 x Z/4
        let rel = MatZ::from_rows(vec![vec![2], vec![0]]);
        assert_eq!(quotient_invariant_factors(&rel, 4), vec![2, 4]);
        // Z/6 modulo <2> = Z/2
        let rel = MatZ::from_rows(vec![vec![2]]);
        assert_eq!(quotient_invariant_factors(&rel, 6), vec![2]);
        // chain assembly: Z/2 + Z/3 -> Z/6
        assert_eq!(assemble_divisor_chain(&[2, 3], 6), vec![6]);
        assert_eq!(assemble_divisor_chain(&[6, 2], 6), vec![2, 6]);
    }
}
