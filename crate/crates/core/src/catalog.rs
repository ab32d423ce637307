//! Example systems used by tests, benches and the sample data files.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::poly::{
    homogenize, LinearForm, Monomial, Polynomial, PolynomialSystem, VariableGroup,
    VariableStructure,
};
use crate::rng::{derived, random_complex};
use crate::sysio::parse_system;

fn parsed(text: &str) -> PolynomialSystem {
    parse_system(text).expect("catalog system parses")
}

/// The parabola `x1^2 y0 - x0^2 y1` on `P^1 x P^1`.
pub fn parabola() -> PolynomialSystem {
    parsed("variable_group x0, x1;\nvariable_group y0, y1;\nf = x1^2*y0 - x0^2*y1;\n")
}

/// Four binomials on `P^2 x P^2` with an irreducible codimension-2 solution set.
pub fn binomials() -> PolynomialSystem {
    parsed(
        "variable_group x0, x1, x2;\nvariable_group y0, y1, y2;\n\
         f1 = x1^3*y1 - x2^3*y2;\n\
         f2 = x1*x2*y0^2 - x0^2*y1*y2;\n\
         f3 = x1^2*y0 - x0*x2*y2;\n\
         f4 = x2^2*y0 - x0*x1*y1;\n",
    )
}

/// An irreducible surface in `P^2 x P^2` of multidegree `2 w^(2,0) + 2 w^(1,1) + 1 w^(0,2)`.
pub fn surface() -> PolynomialSystem {
    parsed(
        "variable_group x0, x1, x2;\nvariable_group y0, y1, y2;\n\
         f1 = x1*y1 - x2*y2;\n\
         f2 = x0*y1*y2 - x1*y0^2;\n\
         f3 = x0*y1^2 - x2*y0^2;\n",
    )
}

/// Three polynomials on `P^2 x P^2` whose solution set has two surfaces and two curves.
pub fn two_surfaces_two_curves() -> PolynomialSystem {
    parsed(
        "variable_group x0, x1, x2;\nvariable_group y0, y1, y2;\n\
         g1 = x0*y2 - x2*y1;\n\
         g2 = x1*y2 - x2*y1;\n\
         g3 = x0*y1*y2 - x1*y0*y2;\n",
    )
}

/// A curve in `P^2 x P^1` made of two lines and a rational curve.
pub fn lines_and_curve() -> PolynomialSystem {
    parsed(
        "variable_group x0, x1, x2;\nvariable_group y0, y1;\n\
         f1 = (y1^2 - y0^2)*x1 - y1^2*x0;\n\
         f2 = (y1^2 - y0^2)*x2 - y1^2*x0;\n",
    )
}

/// Fixed data for tracing [`lines_and_curve`]: the two Segre factors, the
/// chart `x2 = y1 = 1` and the two factors of the general coordinate.
pub struct TraceFixture {
    pub system: PolynomialSystem,
    pub segre: Vec<LinearForm>,
    pub chart: Vec<LinearForm>,
    pub rho: Vec<LinearForm>,
}

pub fn lines_and_curve_fixture() -> TraceFixture {
    let system = lines_and_curve();
    let s = system.structure().clone();
    let f = |g: usize, c: &[f64]| LinearForm::from_real(&s, g, c).unwrap();
    TraceFixture {
        segre: vec![f(0, &[6.0 / 7.0, 3.0 / 5.0, 2.0 / 7.0]), f(1, &[1.0, -0.5])],
        chart: vec![f(0, &[0.0, 0.0, 1.0]), f(1, &[0.0, 1.0])],
        rho: vec![
            f(0, &[2.0 / 7.0, -5.0 / 12.0, 3.0 / 17.0]),
            f(1, &[4.0 / 13.0, -3.0 / 14.0]),
        ],
        system,
    }
}

struct Builder {
    s: Arc<VariableStructure>,
}

impl Builder {
    fn affine(names: Vec<String>) -> Self {
        Self {
            s: Arc::new(VariableStructure::new(vec![VariableGroup::affine(names)]).unwrap()),
        }
    }

    fn v(&self, i: usize) -> Polynomial {
        Polynomial::variable(self.s.clone(), i)
    }

    fn c(&self, z: Complex64) -> Polynomial {
        Polynomial::constant(self.s.clone(), z)
    }

    fn r(&self, x: f64) -> Polynomial {
        self.c(Complex64::new(x, 0.0))
    }

    fn zero(&self) -> Polynomial {
        Polynomial::zero(self.s.clone())
    }
}

type Vec3 = [Polynomial; 3];

fn dot(a: &Vec3, b: &Vec3) -> Polynomial {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
        a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
        a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
    ]
}

fn scaled(a: &Vec3, s: Complex64) -> Vec3 {
    [a[0].scale(s), a[1].scale(s), a[2].scale(s)]
}

fn plus(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0].add(&b[0]), a[1].add(&b[1]), a[2].add(&b[2])]
}

/// Variable groupings for the 6R inverse kinematics system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SixRGrouping {
    /// `{z2, z3, z4, z5}`
    One,
    /// `{z2, z4} x {z3, z5}`
    Two,
    /// `{z2} x {z3} x {z4} x {z5}`
    Four,
}

/// Inverse kinematics of a general 6R serial chain in the unit vectors
/// `z2, ..., z5`, affine, with random complex link parameters.
pub fn six_r_affine(seed: u64) -> PolynomialSystem {
    let names = ["z2", "z3", "z4", "z5"]
        .iter()
        .flat_map(|z| (1..=3).map(move |j| format!("{z}_{j}")))
        .collect();
    let b = Builder::affine(names);
    let mut rng = derived(seed, &[0x6e]);
    let mut rc = || random_complex(&mut rng);
    let z = |k: usize| -> Vec3 { [b.v(3 * k), b.v(3 * k + 1), b.v(3 * k + 2)] };
    let constant = |v: [Complex64; 3]| -> Vec3 { [b.c(v[0]), b.c(v[1]), b.c(v[2])] };
    let z1 = constant([rc(), rc(), rc()]);
    let z6 = constant([rc(), rc(), rc()]);
    let p = constant([rc(), rc(), rc()]);
    let a: Vec<Complex64> = (0..6).map(|_| rc()).collect();
    let c: Vec<Complex64> = (0..6).map(|_| rc()).collect();
    let d: Vec<Complex64> = (0..6).map(|_| rc()).collect();
    let (z2, z3, z4, z5) = (z(0), z(1), z(2), z(3));

    let mut polys = vec![dot(&z1, &z2).sub(&b.c(c[1])), dot(&z5, &z6).sub(&b.c(c[5]))];
    let mut chain = scaled(&cross(&z1, &z2), a[1]);
    chain = plus(&chain, &scaled(&z2, d[2]));
    chain = plus(&chain, &scaled(&cross(&z2, &z3), a[2]));
    chain = plus(&chain, &scaled(&z3, d[3]));
    chain = plus(&chain, &scaled(&cross(&z3, &z4), a[3]));
    chain = plus(&chain, &scaled(&z4, d[4]));
    chain = plus(&chain, &scaled(&cross(&z4, &z5), a[4]));
    chain = plus(&chain, &scaled(&z5, d[5]));
    chain = plus(&chain, &scaled(&cross(&z5, &z6), a[5]));
    for j in 0..3 {
        polys.push(chain[j].sub(&p[j]));
    }
    polys.push(dot(&z2, &z3).sub(&b.c(c[2])));
    polys.push(dot(&z3, &z4).sub(&b.c(c[3])));
    polys.push(dot(&z4, &z5).sub(&b.c(c[4])));
    for zz in [&z2, &z4, &z3, &z5] {
        polys.push(dot(zz, zz).sub(&b.r(1.0)));
    }
    PolynomialSystem::new(b.s.clone(), polys).unwrap()
}

pub fn six_r(seed: u64, grouping: SixRGrouping) -> PolynomialSystem {
    let block = |k: usize| -> Vec<usize> { (3 * k..3 * k + 3).collect() };
    let groups = match grouping {
        SixRGrouping::One => vec![(0..12).collect()],
        SixRGrouping::Two => vec![[block(0), block(2)].concat(), [block(1), block(3)].concat()],
        SixRGrouping::Four => (0..4).map(block).collect(),
    };
    homogenize(&six_r_affine(seed), &groups).unwrap()
}

/// Lagrange points of the restricted three-body problem with mass ratio `mu`,
/// in `rho1, w, d13, d23, x, y`.
pub fn lagrange_affine(mu: f64) -> PolynomialSystem {
    let b = Builder::affine(
        ["rho1", "w", "d13", "d23", "x", "y"]
            .map(String::from)
            .to_vec(),
    );
    let (rho1, w, d13, d23, x, y) = (b.v(0), b.v(1), b.v(2), b.v(3), b.v(4), b.v(5));
    let mu_p = b.r(mu);
    let rho2 = b.r(1.0).sub(&rho1);
    let d13c = d13.pow(3);
    let d23c = d23.pow(3);
    let bracket = w.mul(&d13c).mul(&d23c).sub(&mu_p.mul(&d23c)).sub(&d13c);
    let polys = vec![
        w.mul(&rho1).sub(&b.r(1.0)),
        w.mul(&rho2).sub(&mu_p),
        rho1.sub(&x).pow(2).add(&y.pow(2)).sub(&d13.pow(2)),
        rho2.add(&x).pow(2).add(&y.pow(2)).sub(&d23.pow(2)),
        bracket
            .mul(&x)
            .add(&rho1.mul(&mu_p).mul(&d23c))
            .sub(&rho2.mul(&d13c)),
        bracket.mul(&y),
    ];
    PolynomialSystem::new(b.s.clone(), polys).unwrap()
}

/// [`lagrange_affine`] on `P^1 x P^1 x P^1 x P^1 x P^2`.
pub fn lagrange(mu: f64) -> PolynomialSystem {
    homogenize(
        &lagrange_affine(mu),
        &[vec![0], vec![1], vec![2], vec![3], vec![4, 5]],
    )
    .unwrap()
}

/// Rank-four skew-symmetric `6 x 6` matrices restricted to a random
/// 4-dimensional affine space, with kernel coordinates `lambda`; in `y1..y4, l1..l8`.
pub fn rank_deficiency_affine(seed: u64) -> PolynomialSystem {
    let mut names: Vec<String> = (1..=4).map(|i| format!("y{i}")).collect();
    names.extend((1..=8).map(|i| format!("l{i}")));
    let b = Builder::affine(names);
    let mut rng = derived(seed, &[0x5e]);
    let mut rc = || random_complex(&mut rng);
    let x: Vec<Polynomial> = (0..15)
        .map(|_| {
            let mut acc = b.c(rc());
            for j in 0..4 {
                acc = acc.add(&b.v(j).scale(rc()));
            }
            acc
        })
        .collect();
    let mut s: Vec<Vec<Polynomial>> = vec![vec![b.zero(); 6]; 6];
    let mut idx = 0;
    for r in 0..6 {
        for c in r + 1..6 {
            s[r][c] = x[idx].clone();
            s[c][r] = x[idx].scale(Complex64::new(-1.0, 0.0));
            idx += 1;
        }
    }
    let bm: Vec<Vec<Complex64>> = (0..6).map(|_| (0..6).map(|_| rc()).collect()).collect();
    let lam = |i: usize| b.v(4 + i);
    let u1 = [b.r(1.0), b.r(0.0), lam(0), lam(1), lam(2), lam(3)];
    let u2 = [b.r(0.0), b.r(1.0), lam(4), lam(5), lam(6), lam(7)];
    let mut polys = Vec::with_capacity(12);
    for u in [&u1, &u2] {
        let bu: Vec<Polynomial> = (0..6)
            .map(|r| (0..6).fold(b.zero(), |acc, c| acc.add(&u[c].scale(bm[r][c]))))
            .collect();
        for row in &s {
            polys.push(
                row.iter()
                    .zip(&bu)
                    .fold(b.zero(), |acc, (a, v)| acc.add(&a.mul(v))),
            );
        }
    }
    PolynomialSystem::new(b.s.clone(), polys).unwrap()
}

/// [`rank_deficiency_affine`] on `P^4 x P^8` (`two_groups`) or `P^12`.
pub fn rank_deficiency(seed: u64, two_groups: bool) -> PolynomialSystem {
    let groups = if two_groups {
        vec![(0..4).collect(), (4..12).collect()]
    } else {
        vec![(0..12).collect()]
    };
    homogenize(&rank_deficiency_affine(seed), &groups).unwrap()
}

/// Every monomial of multidegree `d` on `structure`.
pub fn monomials_of_degree(structure: &VariableStructure, d: &[u32]) -> Vec<Monomial> {
    let mut out = vec![vec![0u32; structure.total_vars()]];
    for (i, &di) in d.iter().enumerate() {
        let range = structure.range(i);
        let mut next = Vec::new();
        for base in &out {
            fill(&mut next, base.clone(), range.start, range.end, di);
        }
        out = next;
    }
    out.into_iter().map(Monomial).collect()
}

fn fill(out: &mut Vec<Vec<u32>>, mut exps: Vec<u32>, v: usize, end: usize, left: u32) {
    if v + 1 == end {
        exps[v] = left;
        out.push(exps);
        return;
    }
    for e in 0..=left {
        exps[v] = e;
        fill(out, exps.clone(), v + 1, end, left - e);
    }
}

/// Generic polynomial of multidegree `d` with random complex coefficients.
pub fn random_hypersurface<R: Rng + ?Sized>(
    structure: &Arc<VariableStructure>,
    d: &[u32],
    rng: &mut R,
) -> Polynomial {
    let terms = monomials_of_degree(structure, d)
        .into_iter()
        .map(|m| (m, random_complex(rng)));
    Polynomial::from_terms(structure.clone(), terms)
}
