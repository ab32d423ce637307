use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::catalog::{monomials_of_degree, random_hypersurface};
use crate::rng::{random_vector, seeded};

fn structure(sizes: &[usize]) -> Arc<VariableStructure> {
    Arc::new(VariableStructure::from_sizes(sizes).unwrap())
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

#[test]
fn monomial_counts() {
    let s = structure(&[3, 2]);
    for d in [[0u32, 0], [2, 1], [3, 3]] {
        let want = binomial(d[0] as usize + 2, 2) * binomial(d[1] as usize + 1, 1);
        assert_eq!(monomials_of_degree(&s, &d).len(), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jacobian_matches_finite_differences(seed in 0u64..10_000, d0 in 0u32..4, d1 in 1u32..4) {
        let s = structure(&[2, 3]);
        let mut rng = seeded(seed);
        let polys = (0..3).map(|_| random_hypersurface(&s, &[d0, d1], &mut rng)).collect();
        let sys = PolynomialSystem::new(s.clone(), polys).unwrap();
        let x = random_vector(&mut rng, s.total_vars());
        let jac = sys.jacobian(&x).unwrap();
        let h = 1e-6;
        for v in 0..s.total_vars() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[v] += h;
            xm[v] -= h;
            let fp = sys.evaluate(&xp).unwrap();
            let fm = sys.evaluate(&xm).unwrap();
            for j in 0..sys.len() {
                let fd = (fp[j] - fm[j]) / (2.0 * h);
                let scale = 1f64.max(jac[(j, v)].norm());
                prop_assert!((fd - jac[(j, v)]).norm() <= 1e-5 * scale, "d f{}/d x{} = {} vs {}", j, v, jac[(j, v)], fd);
            }
        }
    }

    #[test]
    fn compiled_evaluation_agrees(seed in 0u64..10_000) {
        let s = structure(&[2, 2]);
        let mut rng = seeded(seed);
        let p = random_hypersurface(&s, &[2, 3], &mut rng);
        let x = random_vector(&mut rng, s.total_vars());
        let cp = CompiledPoly::new(&p);
        let mut grad = vec![Complex64::new(0.0, 0.0); s.total_vars()];
        let value = cp.eval_grad(&x, Complex64::new(1.0, 0.0), &mut grad);
        prop_assert!((value - p.eval(&x)).norm() < 1e-10 * (1.0 + value.norm()));
        prop_assert!((cp.eval(&x) - value).norm() < 1e-12 * (1.0 + value.norm()));
        for (v, g) in grad.iter().enumerate() {
            let want = p.derivative(v).eval(&x);
            prop_assert!((g - want).norm() < 1e-10 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn randomization_keeps_common_zeros(seed in 0u64..10_000, target in 1usize..3) {
        // every input polynomial carries a factor vanishing at a fixed point z
        let s = structure(&[2, 2]);
        let mut rng = seeded(seed);
        let z = random_vector(&mut rng, s.total_vars());
        let ell = {
            let mut a = random_vector(&mut rng, 2);
            a[1] = -a[0] * z[0] / z[1];
            LinearForm::new(&s, 0, a).unwrap().to_polynomial(&s)
        };
        let degs = [[1u32, 2], [2, 1], [1, 1]];
        let polys = degs.iter().map(|d| ell.mul(&random_hypersurface(&s, &[d[0] - 1, d[1]], &mut rng))).collect();
        let sys = PolynomialSystem::new(s.clone(), polys).unwrap();
        let chart: Vec<LinearForm> = (0..2).map(|i| LinearForm::new(&s, i, random_vector(&mut rng, 2)).unwrap()).collect();
        let out = randomize(&sys, target, &chart, &mut rng).unwrap();
        prop_assert_eq!(out.len(), target);
        for (p, v) in out.polys().iter().zip(out.evaluate(&z).unwrap()) {
            prop_assert!(p.is_multihomogeneous());
            prop_assert!(v.norm() < 1e-10 * p.coefficient_scale().max(1.0));
        }
    }
}
