//! Cross-checks the numerical projective character tables at trivial
//! cocycle against an independent ordinary-character computation that works
//! with exact class sums and an r x r eigenproblem on the center.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xmodular::numeric::{self, CMat};
use xmodular::{projective_character_table, FiniteGroup, TwistedCocycle};

/// Ordinary character table rows via eigenspaces of class sums.
fn class_sum_character_table(g: &FiniteGroup, seed: u64) -> Vec<(usize, Vec<Complex64>)> {
    let n = g.order();
    let classes = g.conjugacy_classes();
    let r = classes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // class sums as coefficient vectors over the group basis
    let sums: Vec<Vec<f64>> = classes
        .iter()
        .map(|cl| {
            let mut v = vec![0.0; n];
            for &x in cl {
                v[x] = 1.0;
            }
            v
        })
        .collect();
    // class of inverses, to build self-adjoint combinations
    let inv_class: Vec<usize> = classes
        .iter()
        .map(|cl| {
            let target = g.inv(cl[0]);
            classes.iter().position(|c| c.contains(&target)).unwrap()
        })
        .collect();

    let mul = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for x in 0..n {
            if a[x].norm_sqr() == 0.0 {
                continue;
            }
            for y in 0..n {
                out[g.mul(x, y)] += a[x] * b[y];
            }
        }
        out
    };
    let to_c = |v: &[f64]| -> Vec<Complex64> { v.iter().map(|&x| Complex64::new(x, 0.0)).collect() };

    // random self-adjoint central element: t C_j + conj(t) C_{j*}; complex
    // coefficients are needed to separate conjugate character pairs
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..r {
        let t = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        for x in 0..n {
            z[x] += t * sums[j][x] + t.conj() * sums[inv_class[j]][x];
        }
    }

    // multiplication of the center by z, in the orthonormal basis of
    // normalized class sums; Hermitian because z is self-adjoint
    let norms: Vec<f64> = classes.iter().map(|c| (c.len() as f64).sqrt()).collect();
    let mut zhat = CMat::zeros(r, r);
    for j in 0..r {
        let cj: Vec<Complex64> = to_c(&sums[j]).iter().map(|v| v / norms[j]).collect();
        let zc = mul(&z, &cj);
        for i in 0..r {
            // inner product with normalized class sum i
            let mut acc = Complex64::new(0.0, 0.0);
            for &x in &classes[i] {
                acc += zc[x] * Complex64::new(1.0 / norms[i], 0.0);
            }
            zhat[(i, j)] = acc;
        }
    }
    let (values, vectors) = numeric::hermitian_eigen(&zhat);
    // generic z separates the r one-dimensional central eigenspaces
    for w in values.windows(2) {
        assert!((w[1] - w[0]).abs() > 1e-6, "collided eigenvalues; reseed");
    }

    let mut rows = Vec::with_capacity(r);
    for k in 0..r {
        // central element with these class-sum coordinates
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..r {
            for &x in &classes[j] {
                w[x] += vectors[(j, k)] / norms[j];
            }
        }
        // scale to the idempotent: w^2 = lambda w
        let w2 = mul(&w, &w);
        let pivot = (0..n)
            .max_by(|&a, &b| w[a].norm().partial_cmp(&w[b].norm()).unwrap())
            .unwrap();
        let lambda = w2[pivot] / w[pivot];
        let idem: Vec<Complex64> = w.iter().map(|v| v / lambda).collect();
        // e_i = (d_i/|G|) sum_g conj(chi_i(g)) b_g
        let d = (idem[g.identity()].re * n as f64).max(0.0).sqrt();
        let degree = d.round() as usize;
        assert!((d - degree as f64).abs() < 1e-6);
        let chi: Vec<Complex64> = (0..n)
            .map(|x| (idem[x] * Complex64::new(n as f64 / degree as f64, 0.0)).conj())
            .collect();
        rows.push((degree, chi));
    }
    rows
}

fn sorted_keys(rows: &[(usize, Vec<Complex64>)]) -> Vec<(usize, Vec<(i64, i64)>)> {
    let mut keys: Vec<(usize, Vec<(i64, i64)>)> = rows
        .iter()
        .map(|(d, vals)| {
            (
                *d,
                vals.iter()
                    .map(|z| ((z.re / 1e-6).round() as i64, (z.im / 1e-6).round() as i64))
                    .collect(),
            )
        })
        .collect();
    keys.sort();
    keys
}

#[test]
fn trivial_cocycle_tables_match_class_sum_oracle() {
    let groups: Vec<FiniteGroup> = vec![
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(6),
        FiniteGroup::cyclic(2)
            .direct_product(&FiniteGroup::cyclic(2))
            .unwrap(),
        FiniteGroup::symmetric(3).unwrap(),
        FiniteGroup::dihedral(4),
        FiniteGroup::dihedral(6),
    ];
    for g in groups {
        assert!(g.order() <= 12);
        let oracle = class_sum_character_table(&g, 101);
        let tc = TwistedCocycle::trivial(Arc::new(g), 4);
        let table = projective_character_table(&tc, 7).unwrap();
        let got: Vec<(usize, Vec<Complex64>)> = table
            .degrees
            .iter()
            .zip(&table.values)
            .map(|(d, v)| (*d, v.clone()))
            .collect();
        assert_eq!(
            sorted_keys(&oracle),
            sorted_keys(&got),
            "table mismatch for group of order {}",
            table.cocycle.group().order()
        );
    }
}
