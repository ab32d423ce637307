use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{rank, CMat};
use crate::poly::{product_polynomial, Equation, LinearForm, Polynomial, VariableStructure};
use crate::rng::random_vector;

/// Allocation `e = (e_1, ..., e_k)` of slice codimensions across the factors.
///
/// Ordered lexicographically from the largest vector down, so `(2,0)` comes
/// before `(1,1)` and `(1,0)` before `(0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SliceType(pub Vec<usize>);

impl SliceType {
    pub fn new(e: Vec<usize>, dims: &[usize]) -> Result<Self> {
        if e.len() != dims.len() || e.iter().zip(dims).any(|(a, n)| a > n) {
            return Err(Error::BadSliceType {
                e,
                dims: dims.to_vec(),
            });
        }
        Ok(SliceType(e))
    }

    pub fn abs(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// `self - δ_i`, if that stays nonnegative.
    pub fn minus(&self, i: usize) -> Option<SliceType> {
        (self.0[i] > 0).then(|| {
            let mut d = self.0.clone();
            d[i] -= 1;
            SliceType(d)
        })
    }

    pub fn plus(&self, i: usize) -> SliceType {
        let mut d = self.0.clone();
        d[i] += 1;
        SliceType(d)
    }

    /// Every `e` with `0 <= e <= dims` and `|e| = total`, in slice-type order.
    pub fn all_with_sum(dims: &[usize], total: usize) -> Vec<SliceType> {
        fn rec(dims: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<SliceType>) {
            if cur.len() == dims.len() {
                if left == 0 {
                    out.push(SliceType(cur.clone()));
                }
                return;
            }
            let i = cur.len();
            for v in (0..=dims[i].min(left)).rev() {
                cur.push(v);
                rec(dims, left - v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(dims, total, &mut Vec::new(), &mut out);
        out
    }
}

impl Ord for SliceType {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for SliceType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SliceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Group `i` contributes `e_i` linear forms in its own coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSlice {
    pub forms: Vec<Vec<LinearForm>>,
}

impl LinearSlice {
    pub fn new(structure: &VariableStructure, forms: Vec<Vec<LinearForm>>) -> Result<Self> {
        if forms.len() != structure.group_count() {
            return Err(Error::Invalid(format!(
                "slice needs {} groups of forms",
                structure.group_count()
            )));
        }
        let dims = structure.dims();
        for (i, group) in forms.iter().enumerate() {
            if group.len() > dims[i] {
                return Err(Error::BadSliceType {
                    e: forms.iter().map(Vec::len).collect(),
                    dims,
                });
            }
            if group
                .iter()
                .any(|f| f.group != i || f.coeffs.len() != structure.group_size(i))
            {
                return Err(Error::Invalid(format!("slice form outside group {i}")));
            }
        }
        Ok(Self { forms })
    }

    pub fn empty(k: usize) -> Self {
        Self {
            forms: vec![Vec::new(); k],
        }
    }

    pub fn slice_type(&self) -> SliceType {
        SliceType(self.forms.iter().map(Vec::len).collect())
    }

    pub fn all(&self) -> impl Iterator<Item = &LinearForm> {
        self.forms.iter().flatten()
    }

    pub fn equations(&self) -> Vec<Equation> {
        self.all().map(Equation::linear).collect()
    }

    /// Largest absolute value of the forms at `x`.
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        self.all().map(|f| f.eval(x).norm()).fold(0.0, f64::max)
    }
}

/// One fixed form `H_i` per group; computations normalize to `H_i = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub forms: Vec<LinearForm>,
}

impl Chart {
    pub fn new(structure: &VariableStructure, forms: Vec<LinearForm>) -> Result<Self> {
        if forms.len() != structure.group_count() {
            return Err(Error::Invalid(format!(
                "chart needs {} forms",
                structure.group_count()
            )));
        }
        for (i, h) in forms.iter().enumerate() {
            if h.group != i || h.coeffs.len() != structure.group_size(i) || h.is_zero() {
                return Err(Error::Invalid(format!(
                    "chart form {i} must be a nonzero form in group {i}"
                )));
            }
        }
        Ok(Self { forms })
    }

    pub fn random<R: Rng + ?Sized>(structure: &VariableStructure, rng: &mut R) -> Self {
        let forms = (0..structure.group_count())
            .map(|i| {
                LinearForm::new(structure, i, random_vector(rng, structure.group_size(i))).unwrap()
            })
            .collect();
        Self { forms }
    }

    pub fn normalize(&self, x: &[Complex64]) -> Option<Vec<Complex64>> {
        crate::tracker::normalize_to_chart(&self.forms, x)
    }

    /// `H = prod_i H_i` as a product equation.
    pub fn product(&self) -> Vec<LinearForm> {
        self.forms.clone()
    }
}

fn random_form<R: Rng + ?Sized>(
    structure: &VariableStructure,
    group: usize,
    rng: &mut R,
) -> LinearForm {
    LinearForm::new(
        structure,
        group,
        random_vector(rng, structure.group_size(group)),
    )
    .unwrap()
}

fn independent(forms: &[LinearForm]) -> bool {
    if forms.is_empty() {
        return true;
    }
    let m = CMat::from_fn(forms.len(), forms[0].coeffs.len(), |r, c| {
        forms[r].coeffs[c]
    });
    rank(&m, 1e-8) == forms.len()
}

/// Generic slice of type `e`.
pub fn random_slice<R: Rng + ?Sized>(
    e: &SliceType,
    structure: &VariableStructure,
    rng: &mut R,
) -> Result<LinearSlice> {
    let e = SliceType::new(e.0.clone(), &structure.dims())?;
    let mut forms = Vec::with_capacity(e.k());
    for (i, &ei) in e.0.iter().enumerate() {
        loop {
            let group: Vec<_> = (0..ei).map(|_| random_form(structure, i, rng)).collect();
            if independent(&group) {
                forms.push(group);
                break;
            }
        }
    }
    Ok(LinearSlice { forms })
}

/// Generic slice of type `e` whose forms all vanish at `point`.
///
/// Coefficients are random except one per form, solved so the form vanishes;
/// it is the coefficient of the group's largest coordinate of `point`.
pub fn slice_through_point<R: Rng + ?Sized>(
    e: &SliceType,
    point: &[Complex64],
    structure: &VariableStructure,
    rng: &mut R,
) -> Result<LinearSlice> {
    let e = SliceType::new(e.0.clone(), &structure.dims())?;
    if point.len() != structure.total_vars() {
        return Err(Error::Invalid(
            "point has the wrong number of coordinates".into(),
        ));
    }
    let mut forms = Vec::with_capacity(e.k());
    for (i, &ei) in e.0.iter().enumerate() {
        let coords = &point[structure.range(i)];
        let (pivot, big) = coords
            .iter()
            .enumerate()
            .map(|(j, z)| (j, z.norm()))
            .fold((0, 0.0), |acc, (j, n)| if n > acc.1 { (j, n) } else { acc });
        if big == 0.0 {
            return Err(Error::Invalid(format!(
                "point has all coordinates zero in group {i}"
            )));
        }
        loop {
            let group: Vec<_> = (0..ei)
                .map(|_| {
                    let mut a = random_vector(rng, coords.len());
                    a[pivot] = Complex64::new(0.0, 0.0);
                    let partial: Complex64 = a.iter().zip(coords).map(|(x, y)| x * y).sum();
                    a[pivot] = -partial / coords[pivot];
                    LinearForm::new(structure, i, a).unwrap()
                })
                .collect();
            if independent(&group) {
                forms.push(group);
                break;
            }
        }
    }
    Ok(LinearSlice { forms })
}

/// `n_i` generic forms per group. The slice of type `e` takes the first `e_i`
/// forms of each group, so slices of different types are nested.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceFamily {
    pub forms: Vec<Vec<LinearForm>>,
}

impl SliceFamily {
    pub fn random<R: Rng + ?Sized>(structure: &VariableStructure, rng: &mut R) -> Self {
        let dims = structure.dims();
        let full = SliceType(dims.clone());
        Self {
            forms: random_slice(&full, structure, rng).unwrap().forms,
        }
    }

    pub fn slice(&self, e: &SliceType) -> LinearSlice {
        LinearSlice {
            forms: self
                .forms
                .iter()
                .zip(&e.0)
                .map(|(f, &k)| f[..k].to_vec())
                .collect(),
        }
    }

    /// The form that `slice(e + δ_i)` has beyond `slice(e)`.
    pub fn next_form(&self, e: &SliceType, i: usize) -> &LinearForm {
        &self.forms[i][e.0[i]]
    }
}

/// Multilinear form `R = prod_i r_i`, one factor per group.
#[derive(Debug, Clone, PartialEq)]
pub struct SegreSlice {
    pub factors: Vec<LinearForm>,
}

impl SegreSlice {
    pub fn new(structure: &VariableStructure, factors: Vec<LinearForm>) -> Result<Self> {
        if factors.len() != structure.group_count() {
            return Err(Error::Invalid(
                "a Segre slice needs one factor per group".into(),
            ));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.group != i || f.is_zero() {
                return Err(Error::Invalid(format!(
                    "Segre factor {i} must be a nonzero form in group {i}"
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn random<R: Rng + ?Sized>(structure: &VariableStructure, rng: &mut R) -> Self {
        Self {
            factors: (0..structure.group_count())
                .map(|i| random_form(structure, i, rng))
                .collect(),
        }
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.factors.iter().map(|f| f.eval(x)).product()
    }

    pub fn product_polynomial(&self, structure: &Arc<VariableStructure>) -> Polynomial {
        product_polynomial(structure, &self.factors)
    }

    pub fn equation(&self) -> Equation {
        Equation::product(self.factors.clone())
    }
}
