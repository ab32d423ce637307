use std::collections::HashSet;
use std::ops::Range;

use crate::error::PolyError;

/// One block of coordinates.
///
/// A homogeneous group with `m` names is a factor `P^{m-1}`. An affine group
/// with `m` names is a factor `C^m` awaiting homogenization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableGroup {
    pub names: Vec<String>,
    pub affine: bool,
    /// Index (within the group) of the coordinate introduced by homogenization.
    pub homogenizer: Option<usize>,
}

impl VariableGroup {
    pub fn homogeneous<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Self {
            names: names.into_iter().map(Into::into).collect(),
            affine: false,
            homogenizer: None,
        }
    }

    pub fn affine<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Self {
            names: names.into_iter().map(Into::into).collect(),
            affine: true,
            homogenizer: None,
        }
    }
}

/// Partition of the variables into groups, one per projective (or affine) factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableStructure {
    groups: Vec<VariableGroup>,
    offsets: Vec<usize>,
    total: usize,
}

impl VariableStructure {
    pub fn new(groups: Vec<VariableGroup>) -> Result<Self, PolyError> {
        if groups.is_empty() {
            return Err(PolyError::MalformedGrouping("no variable groups".into()));
        }
        let mut seen = HashSet::new();
        let mut offsets = Vec::with_capacity(groups.len());
        let mut total = 0;
        for (i, g) in groups.iter().enumerate() {
            if g.names.is_empty() {
                return Err(PolyError::MalformedGrouping(format!("group {i} is empty")));
            }
            if let Some(h) = g.homogenizer {
                if h >= g.names.len() || g.affine {
                    return Err(PolyError::MalformedGrouping(format!(
                        "group {i} has a bad homogenizer"
                    )));
                }
            }
            for n in &g.names {
                if !seen.insert(n.clone()) {
                    return Err(PolyError::MalformedGrouping(format!(
                        "duplicate variable `{n}`"
                    )));
                }
            }
            offsets.push(total);
            total += g.names.len();
        }
        Ok(Self {
            groups,
            offsets,
            total,
        })
    }

    /// Homogeneous structure from group sizes, with generated names `v{i}_{j}`.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, PolyError> {
        let groups = sizes
            .iter()
            .enumerate()
            .map(|(i, &m)| VariableGroup::homogeneous((0..m).map(|j| format!("v{i}_{j}"))))
            .collect();
        Self::new(groups)
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn groups(&self) -> &[VariableGroup] {
        &self.groups
    }

    pub fn group(&self, i: usize) -> &VariableGroup {
        &self.groups[i]
    }

    pub fn group_size(&self, i: usize) -> usize {
        self.groups[i].names.len()
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i] + self.groups[i].names.len()
    }

    pub fn total_vars(&self) -> usize {
        self.total
    }

    /// Projective dimensions `(n_1, ..., n_k)`; affine groups count their full size.
    pub fn dims(&self) -> Vec<usize> {
        self.groups
            .iter()
            .map(|g| {
                if g.affine {
                    g.names.len()
                } else {
                    g.names.len() - 1
                }
            })
            .collect()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.groups.iter().all(|g| !g.affine)
    }

    pub fn has_homogenizers(&self) -> bool {
        self.groups.iter().any(|g| g.homogenizer.is_some())
    }

    pub fn group_of(&self, var: usize) -> usize {
        match self.offsets.binary_search(&var) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.groups
            .iter()
            .zip(&self.offsets)
            .find_map(|(g, &off)| g.names.iter().position(|n| n == name).map(|j| off + j))
    }

    pub fn name(&self, var: usize) -> &str {
        let g = self.group_of(var);
        &self.groups[g].names[var - self.offsets[g]]
    }

    /// Global index of the homogenizing coordinate of group `i`, if any.
    pub fn homogenizer_index(&self, i: usize) -> Option<usize> {
        self.groups[i].homogenizer.map(|h| self.offsets[i] + h)
    }
}
