use std::collections::BTreeMap;

use itertools::Itertools;
use num_complex::Complex64;
use petgraph::unionfind::UnionFind;

use super::monodromy::{cross_slice_link, monodromy_group, PointId};
use super::trace::{
    build_trace_homotopy, is_affine_linear, point_traces, subset_trace, GeneralCoordinate,
    TraceSample, TRACE_TOL,
};
use crate::error::{Error, Result};
use crate::rng::{derived, tags};
use crate::tracker::TrackerSettings;
use crate::witness::{compile, SegreSlice, SliceFamily, SliceType, WitnessCollection, WitnessSet};
use crate::LinearForm;

/// Why two points were put in one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Monodromy,
    Membership,
    Trace,
}

/// Blocks of witness points of one dimension, with the joins that produced them.
#[derive(Debug, Clone)]
pub struct Partition {
    pub points: Vec<PointId>,
    /// Indices into `points`; disjoint and covering.
    pub blocks: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize, EdgeKind)>,
}

impl Partition {
    fn new(points: Vec<PointId>) -> Self {
        let blocks = (0..points.len()).map(|j| vec![j]).collect();
        Self {
            points,
            blocks,
            edges: Vec::new(),
        }
    }

    fn rebuild(&mut self) {
        let mut uf = UnionFind::new(self.points.len());
        for &(a, b, _) in &self.edges {
            uf.union(a, b);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for j in 0..self.points.len() {
            groups.entry(uf.find(j)).or_default().push(j);
        }
        let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
        blocks.sort();
        self.blocks = blocks;
    }

    fn join(&mut self, a: usize, b: usize, kind: EdgeKind) {
        self.edges.push((a, b, kind));
    }

    pub fn block_of(&self, j: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&j))
    }
}

#[derive(Debug, Clone)]
pub struct DecomposeOptions {
    pub settings: TrackerSettings,
    pub seed: u64,
    /// Random triangle loops per slice type.
    pub monodromy_loops: usize,
    pub cross_link: bool,
    /// Block subsets examined before giving up.
    pub max_candidates: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self {
            settings: TrackerSettings::default(),
            seed: 0,
            monodromy_loops: 10,
            cross_link: true,
            max_candidates: 1 << 20,
        }
    }
}

/// One piece of the decomposition.
#[derive(Debug, Clone)]
pub struct Component {
    pub collection: WitnessCollection,
    /// Members of the partition's point list.
    pub points: Vec<usize>,
    /// `false` when the trace search stopped before reaching this piece.
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub dimension: usize,
    /// The input moved to nested slices; components refer to its points.
    pub collection: WitnessCollection,
    pub partition: Partition,
    pub components: Vec<Component>,
    /// Trace samples of each certified component, one list per base slice type.
    pub traces: Vec<Vec<(SliceType, Vec<TraceSample>)>>,
    pub inconclusive: bool,
}

/// Points of one base slice type `e0` on a Segre slice, with their trace rows.
#[derive(Debug, Clone)]
pub struct TraceCut {
    pub e0: SliceType,
    /// The points of `V ∩ L^{e0} ∩ R`, taken from the sets `w^{e0 + δ_i}`.
    pub points: Vec<PointId>,
    /// Trace row of each point; `None` where its path failed.
    pub rows: Vec<Option<[Complex64; 3]>>,
}

/// Nested copy of `input` and one trace cut per base type of its dimension.
///
/// `input` must be pure dimensional of positive dimension.
pub fn trace_cuts(
    input: &WitnessCollection,
    seed: u64,
    settings: &TrackerSettings,
) -> Result<(WitnessCollection, Vec<TraceCut>)> {
    let dims = input.dimensions();
    if dims.len() > 1 {
        return Err(Error::Invalid(format!(
            "collection is not pure dimensional: dimensions {dims:?}"
        )));
    }
    let structure = input.system.structure().clone();
    let family = SliceFamily::random(&structure, &mut derived(seed, &[tags::TRACE, 0]));
    let collection = nest(input, &family, settings)?;
    let dimension = match dims.first() {
        Some(&d) if d > 0 => d,
        _ => return Ok((collection, Vec::new())),
    };

    // one cut per base type e0; its Segre slice completes L^{e0} to every L^{e0 + δ_i}
    let n = structure.ambient_dim();
    let tracking = compile(&*collection.tracking_system(n - dimension)?);
    let mut rng = derived(seed, &[tags::TRACE, 1]);
    let rho = GeneralCoordinate::random(&structure, &mut rng);
    let mut cuts = Vec::new();
    for e0 in SliceType::all_with_sum(&structure.dims(), dimension - 1) {
        let mut points = Vec::new();
        let mut pts = Vec::new();
        let factors: Vec<LinearForm> = (0..structure.group_count())
            .map(|i| {
                if e0.0[i] < structure.dims()[i] {
                    family.next_form(&e0, i).clone()
                } else {
                    SegreSlice::random(&structure, &mut rng).factors[i].clone()
                }
            })
            .collect();
        for i in 0..structure.group_count() {
            if e0.0[i] >= structure.dims()[i] {
                continue;
            }
            let e = e0.plus(i);
            if let Some(w) = collection.get(&e) {
                for (index, p) in w.points.iter().enumerate() {
                    points.push(PointId {
                        e: e.clone(),
                        index,
                    });
                    pts.push(p.clone());
                }
            }
        }
        if points.is_empty() {
            continue;
        }
        let segre = SegreSlice::new(&structure, factors)?;
        let h = build_trace_homotopy(
            &structure,
            &tracking,
            &family.slice(&e0),
            &[segre],
            &collection.chart,
        )?;
        let rows = point_traces(&h, &pts, &rho, &collection.chart, settings);
        cuts.push(TraceCut { e0, points, rows });
    }
    Ok((collection, cuts))
}

/// Moves every set of `collection` to the slice of `family` of its type.
fn nest(
    collection: &WitnessCollection,
    family: &SliceFamily,
    settings: &TrackerSettings,
) -> Result<WitnessCollection> {
    let mut out = WitnessCollection::new(
        collection.system.clone(),
        collection.chart.clone(),
        collection.seed,
    );
    for (e, w) in collection.sets() {
        let target = family.slice(e);
        if w.is_empty() || w.slice == target {
            out.insert(w.clone());
            continue;
        }
        let moved = w.track_to(&target, settings)?;
        let failed = moved.iter().filter(|o| !o.is_success()).count();
        if failed > 0 {
            return Err(Error::PathFailures {
                failed,
                total: moved.len(),
            });
        }
        let mut m = w.with_points(target, moved.into_iter().map(|o| o.endpoint).collect());
        m.multiplicities = w.multiplicities.clone();
        out.insert(m);
    }
    Ok(out)
}

fn sub_collection(
    collection: &WitnessCollection,
    partition: &Partition,
    members: &[usize],
) -> WitnessCollection {
    let mut out = WitnessCollection::new(
        collection.system.clone(),
        collection.chart.clone(),
        collection.seed,
    );
    let mut by_type: BTreeMap<&SliceType, Vec<usize>> = BTreeMap::new();
    for &j in members {
        let p = &partition.points[j];
        by_type.entry(&p.e).or_default().push(p.index);
    }
    for (e, idx) in by_type {
        let w = collection
            .get(e)
            .expect("partition refers to a present type");
        let mut s: WitnessSet = w.with_points(
            w.slice.clone(),
            idx.iter().map(|&i| w.points[i].clone()).collect(),
        );
        s.multiplicities = idx.iter().map(|&i| w.multiplicities[i]).collect();
        out.insert(s);
    }
    out
}

/// Splits a pure-dimensional collection into irreducible pieces.
///
/// Monodromy loops and cross-type membership runs merge points first. The
/// remaining blocks are then grouped by the trace test with one Segre slice,
/// trying unions of fewer blocks first.
pub fn decompose(input: &WitnessCollection, options: &DecomposeOptions) -> Result<Decomposition> {
    let settings = &options.settings;
    let seed = options.seed;
    let (collection, cuts) = trace_cuts(input, seed, settings)?;
    let dimension = input.dimensions().first().copied().unwrap_or(0);

    let mut points = Vec::new();
    for (e, w) in collection.sets() {
        points.extend((0..w.len()).map(|index| PointId {
            e: e.clone(),
            index,
        }));
    }
    let id_of: BTreeMap<PointId, usize> = points
        .iter()
        .cloned()
        .enumerate()
        .map(|(j, p)| (p, j))
        .collect();
    let mut partition = Partition::new(points);

    if dimension == 0 {
        let components = (0..partition.points.len())
            .map(|j| Component {
                collection: sub_collection(&collection, &partition, &[j]),
                points: vec![j],
                certified: true,
            })
            .collect();
        let traces = vec![Vec::new(); partition.points.len()];
        return Ok(Decomposition {
            dimension,
            collection,
            partition,
            components,
            traces,
            inconclusive: false,
        });
    }

    for (t, (e, w)) in collection.sets().enumerate() {
        let mut rng = derived(seed, &[tags::MONODROMY, t as u64]);
        for (_, a, b) in monodromy_group(w, options.monodromy_loops, &mut rng, settings)? {
            partition.join(
                id_of[&PointId {
                    e: e.clone(),
                    index: a,
                }],
                id_of[&PointId {
                    e: e.clone(),
                    index: b,
                }],
                EdgeKind::Monodromy,
            );
        }
    }
    if options.cross_link {
        let mut rng = derived(seed, &[tags::MEMBERSHIP, 1]);
        for (a, b) in cross_slice_link(&collection, &mut rng, settings)? {
            partition.join(id_of[&a], id_of[&b], EdgeKind::Membership);
        }
    }
    partition.rebuild();

    let cuts: Vec<(&SliceType, Vec<usize>, &[Option<[Complex64; 3]>])> = cuts
        .iter()
        .map(|c| {
            (
                &c.e0,
                c.points.iter().map(|p| id_of[p]).collect(),
                &c.rows[..],
            )
        })
        .collect();

    let mut remaining: Vec<usize> = (0..partition.blocks.len()).collect();
    let mut found: Vec<(Vec<usize>, Vec<(SliceType, Vec<TraceSample>)>)> = Vec::new();
    let mut examined = 0usize;
    let mut size = 1;
    'search: while !remaining.is_empty() && size <= remaining.len() {
        let mut hit = None;
        for combo in remaining.iter().copied().combinations(size) {
            examined += 1;
            if examined > options.max_candidates {
                break 'search;
            }
            let members: Vec<usize> = combo
                .iter()
                .flat_map(|&b| partition.blocks[b].iter().copied())
                .collect();
            if let Some(samples) = certify(&cuts, &members) {
                hit = Some((combo, members, samples));
                break;
            }
        }
        match hit {
            Some((combo, members, samples)) => {
                for w in members.windows(2) {
                    if partition.block_of(w[0]) != partition.block_of(w[1]) {
                        partition.edges.push((w[0], w[1], EdgeKind::Trace));
                    }
                }
                remaining.retain(|b| !combo.contains(b));
                found.push((members, samples));
            }
            None => size += 1,
        }
    }

    let mut components: Vec<Component> = Vec::new();
    let mut traces = Vec::new();
    for (members, samples) in found {
        components.push(Component {
            collection: sub_collection(&collection, &partition, &members),
            points: members,
            certified: true,
        });
        traces.push(samples);
    }
    let inconclusive = !remaining.is_empty();
    for b in remaining {
        let members = partition.blocks[b].clone();
        components.push(Component {
            collection: sub_collection(&collection, &partition, &members),
            points: members,
            certified: false,
        });
        traces.push(Vec::new());
    }
    partition.rebuild();
    Ok(Decomposition {
        dimension,
        collection,
        partition,
        components,
        traces,
        inconclusive,
    })
}

/// Linear trace on every cut meeting `members`; the samples are returned.
fn certify(
    cuts: &[(&SliceType, Vec<usize>, &[Option<[Complex64; 3]>])],
    members: &[usize],
) -> Option<Vec<(SliceType, Vec<TraceSample>)>> {
    let mut out = Vec::new();
    for (e0, ids, rows) in cuts {
        let local: Vec<usize> = ids
            .iter()
            .enumerate()
            .filter(|(_, m)| members.contains(m))
            .map(|(k, _)| k)
            .collect();
        if local.is_empty() {
            continue;
        }
        let samples = subset_trace(rows, &local)?;
        if !is_affine_linear(&samples, TRACE_TOL) {
            return None;
        }
        out.push(((*e0).clone(), samples));
    }
    Some(out)
}

/// Decomposes every dimension of `collection`, largest first.
pub fn decompose_all(
    collection: &WitnessCollection,
    options: &DecomposeOptions,
) -> Result<Vec<Decomposition>> {
    collection
        .dimensions()
        .into_iter()
        .map(|d| decompose(&collection.of_dimension(d), options))
        .collect()
}
