use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use super::linear::LinearForm;
use super::polynomial::{Monomial, MultiDegree, Polynomial};
use super::structure::{VariableGroup, VariableStructure};
use crate::error::PolyError;
use crate::rng::random_complex;

/// An ordered list of polynomials over one shared variable structure.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSystem {
    structure: Arc<VariableStructure>,
    polys: Vec<Polynomial>,
    names: Vec<String>,
}

impl PolynomialSystem {
    pub fn new(
        structure: Arc<VariableStructure>,
        polys: Vec<Polynomial>,
    ) -> Result<Self, PolyError> {
        let names = (1..=polys.len()).map(|i| format!("f{i}")).collect();
        Self::with_names(structure, polys, names)
    }

    pub fn with_names(
        structure: Arc<VariableStructure>,
        polys: Vec<Polynomial>,
        names: Vec<String>,
    ) -> Result<Self, PolyError> {
        if polys.iter().any(|p| p.structure() != &structure) {
            return Err(PolyError::StructureMismatch);
        }
        if names.len() != polys.len() {
            return Err(PolyError::DimensionMismatch {
                expected: polys.len(),
                got: names.len(),
            });
        }
        Ok(Self {
            structure,
            polys,
            names,
        })
    }

    pub fn empty(structure: Arc<VariableStructure>) -> Self {
        Self {
            structure,
            polys: Vec::new(),
            names: Vec::new(),
        }
    }

    pub fn structure(&self) -> &Arc<VariableStructure> {
        &self.structure
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// First `n` polynomials.
    pub fn prefix(&self, n: usize) -> PolynomialSystem {
        PolynomialSystem {
            structure: self.structure.clone(),
            polys: self.polys[..n].to_vec(),
            names: self.names[..n].to_vec(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, p: Polynomial) {
        assert_eq!(p.structure(), &self.structure);
        self.names.push(name.into());
        self.polys.push(p);
    }

    fn check_point(&self, point: &[Complex64]) -> Result<(), PolyError> {
        if point.len() != self.structure.total_vars() {
            return Err(PolyError::DimensionMismatch {
                expected: self.structure.total_vars(),
                got: point.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, point: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
        self.check_point(point)?;
        Ok(self.polys.iter().map(|p| p.eval(point)).collect())
    }

    /// Rows are polynomials, columns are variables.
    pub fn jacobian(&self, point: &[Complex64]) -> Result<DMatrix<Complex64>, PolyError> {
        self.check_point(point)?;
        let n = self.structure.total_vars();
        let mut jac = DMatrix::zeros(self.polys.len(), n);
        for (r, p) in self.polys.iter().enumerate() {
            for (m, c) in p.terms() {
                for v in 0..n {
                    let k = m.0[v];
                    if k == 0 {
                        continue;
                    }
                    let mut e = m.0.clone();
                    e[v] -= 1;
                    jac[(r, v)] += c * (k as f64) * Monomial(e).eval(point);
                }
            }
        }
        Ok(jac)
    }

    pub fn multidegrees(&self) -> Result<Vec<MultiDegree>, PolyError> {
        self.polys.iter().map(Polynomial::multidegree).collect()
    }

    /// Largest relative residual `|f_j(x)| / (term scale of f_j at x)` over the system.
    pub fn relative_residual(&self, point: &[Complex64]) -> f64 {
        self.polys
            .iter()
            .map(|p| {
                let scale = p.term_scale(point);
                if scale == 0.0 {
                    0.0
                } else {
                    p.eval(point).norm() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

fn unique_name(structure_names: &mut Vec<String>, base: String) -> String {
    let mut name = base;
    while structure_names.contains(&name) {
        name.push('_');
    }
    structure_names.push(name.clone());
    name
}

/// Homogenizes an affine system with respect to a partition of its variables.
///
/// Each block of `grouping` receives one new coordinate, placed first in its group,
/// and every polynomial is raised to its group-wise maximal degree.
pub fn homogenize(
    sys: &PolynomialSystem,
    grouping: &[Vec<usize>],
) -> Result<PolynomialSystem, PolyError> {
    let old = sys.structure();
    let n_old = old.total_vars();
    let mut seen = vec![false; n_old];
    for block in grouping {
        if block.is_empty() {
            return Err(PolyError::MalformedGrouping("empty block".into()));
        }
        for &v in block {
            if v >= n_old || seen[v] {
                return Err(PolyError::MalformedGrouping(format!(
                    "variable {v} repeated or out of range"
                )));
            }
            seen[v] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(PolyError::MalformedGrouping(
            "grouping does not cover every variable".into(),
        ));
    }

    let mut all_names: Vec<String> = (0..n_old).map(|v| old.name(v).to_string()).collect();
    let mut groups = Vec::with_capacity(grouping.len());
    // new index of each old variable
    let mut remap = vec![0usize; n_old];
    let mut next = 0;
    for block in grouping {
        let hname = unique_name(&mut all_names, format!("h_{}", old.name(block[0])));
        let mut names = vec![hname];
        next += 1;
        for &v in block {
            names.push(old.name(v).to_string());
            remap[v] = next;
            next += 1;
        }
        groups.push(VariableGroup {
            names,
            affine: false,
            homogenizer: Some(0),
        });
    }
    let structure = Arc::new(VariableStructure::new(groups)?);
    let n_new = structure.total_vars();

    let mut out = Vec::with_capacity(sys.len());
    for p in sys.polys() {
        let block_deg =
            |m: &Monomial, b: usize| -> u32 { grouping[b].iter().map(|&v| m.0[v]).sum() };
        let maxdeg: Vec<u32> = (0..grouping.len())
            .map(|b| p.terms().map(|(m, _)| block_deg(m, b)).max().unwrap_or(0))
            .collect();
        let terms = p.terms().map(|(m, c)| {
            let mut e = vec![0u32; n_new];
            for v in 0..n_old {
                e[remap[v]] = m.0[v];
            }
            for (b, &d) in maxdeg.iter().enumerate() {
                e[structure.offset(b)] = d - block_deg(m, b);
            }
            (Monomial(e), *c)
        });
        out.push(Polynomial::from_terms(structure.clone(), terms));
    }
    PolynomialSystem::with_names(structure, out, sys.names().to_vec())
}

/// Sets every homogenizing coordinate to one and drops it, returning an affine system.
pub fn dehomogenize(sys: &PolynomialSystem) -> Result<PolynomialSystem, PolyError> {
    let s = sys.structure();
    let mut keep = Vec::new();
    let mut groups = Vec::new();
    for i in 0..s.group_count() {
        let g = s.group(i);
        let h = s.homogenizer_index(i);
        let names: Vec<String> = s
            .range(i)
            .filter(|v| Some(*v) != h)
            .map(|v| s.name(v).to_string())
            .collect();
        keep.extend(s.range(i).filter(|v| Some(*v) != h));
        if names.is_empty() {
            continue;
        }
        groups.push(VariableGroup {
            names,
            affine: g.homogenizer.is_some() || g.affine,
            homogenizer: None,
        });
    }
    let structure = Arc::new(VariableStructure::new(groups)?);
    let polys = sys
        .polys()
        .iter()
        .map(|p| {
            Polynomial::from_terms(
                structure.clone(),
                p.terms()
                    .map(|(m, c)| (Monomial(keep.iter().map(|&v| m.0[v]).collect()), *c)),
            )
        })
        .collect();
    PolynomialSystem::with_names(structure, polys, sys.names().to_vec())
}

fn check_chart(structure: &VariableStructure, chart: &[LinearForm]) -> Result<(), PolyError> {
    if chart.len() != structure.group_count() {
        return Err(PolyError::MalformedChart(format!(
            "expected {} forms, got {}",
            structure.group_count(),
            chart.len()
        )));
    }
    for (i, h) in chart.iter().enumerate() {
        if h.group != i || h.coeffs.len() != structure.group_size(i) || h.is_zero() {
            return Err(PolyError::MalformedChart(format!(
                "form {i} must be a nonzero form in group {i}"
            )));
        }
    }
    Ok(())
}

/// `prod_i H_i^{d_i}` as a polynomial.
pub fn chart_power(
    structure: &Arc<VariableStructure>,
    chart: &[LinearForm],
    d: &[u32],
) -> Polynomial {
    let mut acc = Polynomial::constant(structure.clone(), Complex64::new(1.0, 0.0));
    for (h, &k) in chart.iter().zip(d) {
        if k > 0 {
            acc = acc.mul(&h.to_polynomial(structure).pow(k));
        }
    }
    acc
}

fn dominates(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

fn cmax(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// Randomizes `sys` down to `target` polynomials while keeping multihomogeneity.
///
/// Output `j` is `input_j + sum_{m >= target} a_{jm} H^{gap} input_m`. When a tail
/// degree is not dominated by `deg(input_j)`, output `j` is lifted to the
/// componentwise maximum of its own and the tail degrees.
pub fn randomize<R: Rng + ?Sized>(
    sys: &PolynomialSystem,
    target: usize,
    chart: &[LinearForm],
    rng: &mut R,
) -> Result<PolynomialSystem, PolyError> {
    let structure = sys.structure();
    check_chart(structure, chart)?;
    if target > sys.len() {
        return Err(PolyError::TooFewPolynomials {
            have: sys.len(),
            want: target,
        });
    }
    let degs = sys.multidegrees()?;
    if target == sys.len() {
        return Ok(sys.clone());
    }
    let tail_max = degs[target..]
        .iter()
        .fold(vec![0; structure.group_count()], |acc, d| cmax(&acc, d));
    let mut out = Vec::with_capacity(target);
    for j in 0..target {
        let goal = if degs[target..].iter().all(|d| dominates(&degs[j], d)) {
            degs[j].clone()
        } else {
            cmax(&degs[j], &tail_max)
        };
        let gap = |d: &[u32]| -> Vec<u32> { goal.iter().zip(d).map(|(g, x)| g - x).collect() };
        let mut acc = sys.polys()[j].mul(&chart_power(structure, chart, &gap(&degs[j])));
        for m in target..sys.len() {
            let a = random_complex(rng);
            let lifted = sys.polys()[m].mul(&chart_power(structure, chart, &gap(&degs[m])));
            acc = acc.add(&lifted.scale(a));
        }
        out.push(acc);
    }
    PolynomialSystem::with_names(structure.clone(), out, sys.names()[..target].to_vec())
}

/// Replaces every polynomial by a generic combination of all of them, lifted
/// to the common componentwise maximum degree. The polynomial count is kept.
pub fn generic_combination<R: Rng + ?Sized>(
    sys: &PolynomialSystem,
    chart: &[LinearForm],
    rng: &mut R,
) -> Result<PolynomialSystem, PolyError> {
    let structure = sys.structure();
    check_chart(structure, chart)?;
    let degs = sys.multidegrees()?;
    let goal = degs
        .iter()
        .fold(vec![0; structure.group_count()], |acc, d| cmax(&acc, d));
    let lifted: Vec<Polynomial> = sys
        .polys()
        .iter()
        .zip(&degs)
        .map(|(p, d)| {
            let gap: Vec<u32> = goal.iter().zip(d).map(|(g, x)| g - x).collect();
            p.mul(&chart_power(structure, chart, &gap))
        })
        .collect();
    let mut out = Vec::with_capacity(sys.len());
    for _ in 0..sys.len() {
        let mut acc = Polynomial::zero(structure.clone());
        for p in &lifted {
            acc = acc.add(&p.scale(random_complex(rng)));
        }
        out.push(acc);
    }
    PolynomialSystem::with_names(structure.clone(), out, sys.names().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn affine_xy() -> PolynomialSystem {
        let s = Arc::new(
            VariableStructure::new(vec![
                VariableGroup::affine(["x"]),
                VariableGroup::affine(["y"]),
            ])
            .unwrap(),
        );
        // x^2 + y - 1
        let p = Polynomial::from_terms(
            s.clone(),
            [
                (Monomial(vec![2, 0]), c(1.0)),
                (Monomial(vec![0, 1]), c(1.0)),
                (Monomial(vec![0, 0]), c(-1.0)),
            ],
        );
        PolynomialSystem::new(s, vec![p]).unwrap()
    }

    #[test]
    fn homogenize_two_groups() {
        let h = homogenize(&affine_xy(), &[vec![0], vec![1]]).unwrap();
        let s = h.structure();
        assert_eq!(s.group(0).names, vec!["h_x", "x"]);
        assert_eq!(s.group(1).names, vec!["h_y", "y"]);
        // x^2 v + y u^2 - u^2 v with (u, x, v, y) ordering
        let expected = Polynomial::from_terms(
            s.clone(),
            [
                (Monomial(vec![0, 2, 1, 0]), c(1.0)),
                (Monomial(vec![2, 0, 0, 1]), c(1.0)),
                (Monomial(vec![2, 0, 1, 0]), c(-1.0)),
            ],
        );
        assert_eq!(h.polys()[0], expected);
        assert_eq!(h.polys()[0].multidegree().unwrap(), vec![2, 1]);
        let back = dehomogenize(&h).unwrap();
        assert_eq!(
            back.polys()[0].term_map(),
            affine_xy().polys()[0].term_map()
        );
    }

    #[test]
    fn homogenize_rejects_bad_grouping() {
        assert!(homogenize(&affine_xy(), &[vec![0]]).is_err());
        assert!(homogenize(&affine_xy(), &[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn randomize_full_count_is_identity() {
        let h = homogenize(&affine_xy(), &[vec![0], vec![1]]).unwrap();
        let s = h.structure().clone();
        let chart = vec![
            LinearForm::from_real(&s, 0, &[1.0, 0.5]).unwrap(),
            LinearForm::from_real(&s, 1, &[0.3, 1.0]).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(randomize(&h, 1, &chart, &mut rng).unwrap(), h);
        assert!(randomize(&h, 2, &chart, &mut rng).is_err());
        let bad = vec![chart[0].clone()];
        assert!(randomize(&h, 1, &bad, &mut rng).is_err());
    }
}
