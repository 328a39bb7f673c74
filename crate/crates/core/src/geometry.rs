//! Lattice region machinery: neighborhoods, circuit spread, and partitions of
//! the lattice into regions (fattened tilings, tubes, random-cell regions).
//!
//! All constructions work on sites; a region contains every qubit of each
//! selected site.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::lattice::LatticeGeometry;
use crate::region::Region;

/// `B(R, r)`: `R` plus every qubit whose site is within Chebyshev distance
/// `r` of a site of `R`. `B(R, 0) = R`; qubits sharing a site with `R` are
/// added from `r = 1` on.
pub fn neighborhood(geo: &LatticeGeometry, r: &Region, radius: usize) -> Region {
    if radius == 0 {
        return r.clone();
    }
    let mut sites = vec![false; geo.num_sites()];
    for q in r.iter() {
        sites[geo.site_of(q)] = true;
    }
    let sites = dilate(geo, sites, radius);
    let mut out = geo.region_of_sites((0..sites.len()).filter(|&s| sites[s]));
    out = out.union(r);
    out
}

/// Chebyshev dilation of a site set, one axis at a time.
fn dilate(geo: &LatticeGeometry, mut sites: Vec<bool>, radius: usize) -> Vec<bool> {
    let l = geo.size();
    let reach = radius.min(l);
    let mut stride = 1;
    for axis in 0..geo.dim() {
        let periodic = geo.periodic()[axis];
        let mut next = sites.clone();
        for s in 0..sites.len() {
            if !sites[s] {
                continue;
            }
            let c = (s / stride) % l;
            let base = s - c * stride;
            for d in 1..=reach {
                for target in [c as isize - d as isize, (c + d) as isize] {
                    let t = if periodic {
                        target.rem_euclid(l as isize) as usize
                    } else if (0..l as isize).contains(&target) {
                        target as usize
                    } else {
                        continue;
                    };
                    next[base + t * stride] = true;
                }
            }
        }
        sites = next;
        stride *= l;
    }
    sites
}

/// Layers of gate supports; gates within a layer are disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCircuit {
    layers: Vec<Vec<Vec<usize>>>,
}

impl LocalCircuit {
    pub fn new(n: usize, layers: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        for (li, layer) in layers.iter().enumerate() {
            let mut used = BitVec::zeros(n);
            for gate in layer {
                for &q in gate {
                    if q >= n {
                        return Err(Error::InvalidParameter(format!("layer {li}: qubit {q} out of range")));
                    }
                    if used.get(q) {
                        return Err(Error::InvalidParameter(format!("layer {li}: gates overlap on qubit {q}")));
                    }
                    used.set(q, true);
                }
            }
        }
        Ok(LocalCircuit { layers })
    }

    pub fn layers(&self) -> &[Vec<Vec<usize>>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

/// How far one gate can move support: its site diameter, but at least 1 for
/// a multi-qubit gate since `B(R, 0)` leaves out co-sited qubits.
fn gate_reach(geo: &LatticeGeometry, gate: &[usize]) -> usize {
    if gate.len() <= 1 {
        0
    } else {
        geo.diameter(gate).max(1)
    }
}

/// Light-cone bound on the spread: the sum over layers of the largest gate
/// reach in the layer.
pub fn circuit_spread(geo: &LatticeGeometry, c: &LocalCircuit) -> usize {
    c.layers()
        .iter()
        .map(|layer| layer.iter().map(|g| gate_reach(geo, g)).max().unwrap_or(0))
        .sum()
}

/// Random circuit of `depth` layers of two-qubit gates between qubits on the
/// same or adjacent sites (Chebyshev distance 1); each qubit is touched at
/// most once per layer and idles with probability 1/2.
pub fn random_local_circuit(geo: &LatticeGeometry, depth: usize, rng: &mut impl Rng) -> LocalCircuit {
    let n = geo.num_qubits();
    let mut layers = Vec::with_capacity(depth);
    for _ in 0..depth {
        let mut used = vec![false; n];
        let mut layer = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        for &a in &order {
            if used[a] || rng.gen_bool(0.5) {
                continue;
            }
            let partners: Vec<usize> = ball_sites(geo, geo.coords(a), 1)
                .flat_map(|s| geo.qubits_at_site(s).iter().copied())
                .filter(|&b| b != a && !used[b])
                .collect();
            if partners.is_empty() {
                continue;
            }
            let b = partners[rng.gen_range(0..partners.len())];
            used[a] = true;
            used[b] = true;
            layer.push(vec![a, b]);
        }
        layers.push(layer);
    }
    LocalCircuit::new(n, layers).expect("layers are disjoint by construction")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Elementary {
    H(usize),
    S(usize),
    Cnot(usize, usize),
}

/// Conjugates the symplectic vector `(x | z)` (phases dropped) through one
/// elementary Clifford gate.
fn conjugate_symplectic(g: Elementary, x: &mut [bool], z: &mut [bool]) {
    match g {
        Elementary::H(q) => std::mem::swap(&mut x[q], &mut z[q]),
        Elementary::S(q) => z[q] ^= x[q],
        Elementary::Cnot(c, t) => {
            x[t] ^= x[c];
            z[c] ^= z[t];
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpreadReport {
    pub circuits: usize,
    pub max_depth: usize,
    pub violations: usize,
    /// `(circuit index, spread bound, offending qubit)` of the first few.
    pub examples: Vec<(usize, usize, usize)>,
}

/// For random local circuits of depth `1..=max_depth`, each two-qubit gate a
/// random product of `H`, `S` and `CNOT`, checks that conjugating a random
/// Pauli keeps its support inside `B(supp, circuit_spread)`.
pub fn spread_soundness(
    geo: &LatticeGeometry,
    circuits: usize,
    max_depth: usize,
    rng: &mut impl Rng,
) -> Result<SpreadReport> {
    if max_depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let n = geo.num_qubits();
    let mut report = SpreadReport {
        circuits,
        max_depth,
        violations: 0,
        examples: Vec::new(),
    };
    for ci in 0..circuits {
        let depth = rng.gen_range(1..=max_depth);
        let circuit = random_local_circuit(geo, depth, rng);
        let bound = circuit_spread(geo, &circuit);
        let mut x = vec![false; n];
        let mut z = vec![false; n];
        let centre = rng.gen_range(0..n);
        for q in neighborhood(geo, &Region::new(n, [centre])?, 1).iter() {
            x[q] = rng.gen_bool(0.5);
            z[q] = rng.gen_bool(0.5);
        }
        x[centre] = true;
        let support = Region::new(n, (0..n).filter(|&q| x[q] || z[q]))?;
        for layer in circuit.layers() {
            for gate in layer {
                let (a, b) = (gate[0], gate[1]);
                for _ in 0..4 {
                    let e = match rng.gen_range(0..6) {
                        0 => Elementary::H(a),
                        1 => Elementary::H(b),
                        2 => Elementary::S(a),
                        3 => Elementary::S(b),
                        4 => Elementary::Cnot(a, b),
                        _ => Elementary::Cnot(b, a),
                    };
                    conjugate_symplectic(e, &mut x, &mut z);
                }
            }
        }
        let allowed = neighborhood(geo, &support, bound);
        if let Some(q) = (0..n).find(|&q| (x[q] || z[q]) && !allowed.contains(q)) {
            report.violations += 1;
            if report.examples.len() < 8 {
                report.examples.push((ci, bound, q));
            }
        }
    }
    Ok(report)
}

/// A family of regions: `r0` plus an ordered list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PartitionData", try_from = "PartitionData")]
pub struct Partition {
    pub r0: Region,
    pub regions: Vec<Region>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PartitionData {
    num_qubits: usize,
    r0: Vec<usize>,
    regions: Vec<Vec<usize>>,
    #[serde(default)]
    metadata: BTreeMap<String, String>,
}

impl From<Partition> for PartitionData {
    fn from(p: Partition) -> Self {
        PartitionData {
            num_qubits: p.r0.num_qubits(),
            r0: p.r0.qubits(),
            regions: p.regions.iter().map(Region::qubits).collect(),
            metadata: p.metadata,
        }
    }
}

impl TryFrom<PartitionData> for Partition {
    type Error = Error;

    fn try_from(d: PartitionData) -> Result<Self> {
        Ok(Partition {
            r0: Region::new(d.num_qubits, d.r0)?,
            regions: d
                .regions
                .into_iter()
                .map(|r| Region::new(d.num_qubits, r))
                .collect::<Result<_>>()?,
            metadata: d.metadata,
        })
    }
}

impl Partition {
    pub fn num_qubits(&self) -> usize {
        self.r0.num_qubits()
    }

    pub fn uncovered(&self) -> Region {
        let mut all = self.r0.clone();
        for r in &self.regions {
            all = all.union(r);
        }
        all.complement()
    }

    pub fn check_covering(&self) -> Result<()> {
        if self.regions.iter().any(|r| r.num_qubits() != self.num_qubits()) {
            return Err(Error::InvalidParameter("partition regions disagree on qubit count".into()));
        }
        let missing = self.uncovered().len();
        if missing > 0 {
            return Err(Error::NotCovering { missing });
        }
        Ok(())
    }
}

/// Components of a region under nearest-neighbour site adjacency (sites
/// differing by one step along a single axis, wrapping where periodic).
pub fn connected_components(geo: &LatticeGeometry, r: &Region) -> Vec<Region> {
    let l = geo.size();
    let mut in_region = vec![false; geo.num_sites()];
    for q in r.iter() {
        in_region[geo.site_of(q)] = true;
    }
    let mut label = vec![usize::MAX; geo.num_sites()];
    let mut components = Vec::new();
    for start in 0..in_region.len() {
        if !in_region[start] || label[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut stack = vec![start];
        label[start] = id;
        let mut members = Vec::new();
        while let Some(s) = stack.pop() {
            members.push(s);
            let mut stride = 1;
            for axis in 0..geo.dim() {
                let c = (s / stride) % l;
                let base = s - c * stride;
                let mut steps = Vec::with_capacity(2);
                if c + 1 < l {
                    steps.push(c + 1);
                } else if geo.periodic()[axis] && l > 1 {
                    steps.push(0);
                }
                if c > 0 {
                    steps.push(c - 1);
                } else if geo.periodic()[axis] && l > 1 {
                    steps.push(l - 1);
                }
                for t in steps {
                    let nb = base + t * stride;
                    if in_region[nb] && label[nb] == usize::MAX {
                        label[nb] = id;
                        stack.push(nb);
                    }
                }
                stride *= l;
            }
        }
        let qubits = members
            .iter()
            .flat_map(|&s| geo.qubits_at_site(s).iter().copied())
            .filter(|&q| r.contains(q));
        let mut mask = BitVec::zeros(r.num_qubits());
        for q in qubits {
            mask.set(q, true);
        }
        components.push(Region::from_mask(mask));
    }
    components
}

/// Default fattening widths for tile size `t` in `D` dimensions: the vertex
/// width is the largest `w >= 1` with `4w < t`, and each higher skeleton
/// dimension is one narrower, down to zero.
pub fn default_widths(dim: usize, tile: usize) -> Vec<usize> {
    let w0 = (tile.saturating_sub(1) / 4).max(1);
    (0..dim).map(|m| w0.saturating_sub(m)).collect()
}

fn near_grid(c: usize, tile: usize, width: usize) -> bool {
    let r = c % tile;
    r <= width || tile - r <= width
}

/// Fattened skeleton of the `t`-tiling: `R_0` holds sites within `widths[0]`
/// of a tile corner along every axis; `R_m` (for `1 <= m < D`) holds the
/// remaining sites within `widths[m]` of the grid along at least `D - m`
/// axes; `R_D` is everything else. Returned as `r0 = R_0`, `regions =
/// [R_1, ..., R_D]`.
pub fn fattened_tiling(geo: &LatticeGeometry, tile: usize, widths: Option<&[usize]>) -> Result<Partition> {
    let dim = geo.dim();
    let l = geo.size();
    if tile == 0 || tile > l {
        return Err(Error::InvalidParameter(format!("tile size {tile} must be in 1..={l}")));
    }
    let widths: Vec<usize> = match widths {
        Some(w) if w.len() == dim => w.to_vec(),
        Some(w) => {
            return Err(Error::InvalidParameter(format!(
                "need {dim} widths (one per skeleton dimension 0..D), got {}",
                w.len()
            )))
        }
        None => default_widths(dim, tile),
    };
    let max_w = widths.iter().copied().max().unwrap_or(0);
    if 4 * max_w >= tile {
        return Err(Error::InvalidParameter(format!(
            "widths {widths:?} too large for tile {tile} (need 4 * width < tile)"
        )));
    }

    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); dim + 1];
    for s in 0..geo.num_sites() {
        let c = geo.site_coords(s);
        let mut class = dim;
        for (m, &w) in widths.iter().enumerate() {
            let near = c.iter().filter(|&&v| near_grid(v, tile, w)).count();
            if near >= dim - m {
                class = m;
                break;
            }
        }
        classes[class].push(s);
    }
    let mut regions: Vec<Region> = classes.into_iter().map(|sites| geo.region_of_sites(sites)).collect();
    let r0 = regions.remove(0);
    let mut metadata = BTreeMap::new();
    metadata.insert("scheme".into(), "tiling".into());
    metadata.insert("tile".into(), tile.to_string());
    metadata.insert(
        "widths".into(),
        widths.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(","),
    );
    let p = Partition { r0, regions, metadata };
    p.check_covering()?;
    Ok(p)
}

/// Partition into `D - q + 1` regions, each a family of parallel slabs
/// extended along the `q` axes `axis, axis+1, ...` (mod `D`).
///
/// The remaining `D - q` cross-section axes are cut into tiles of side `tile`
/// (the last tile absorbs any remainder). A cross-section coordinate is on the
/// grid when its offset inside its tile is below `width`. A site on the grid
/// along `D - q - m` cross-section axes goes to region `m`, so `r0` is made of
/// `w^(D-q)` tubes at tile corners, and region `m` of slabs of cross-section
/// `w^(D-q-m) (tile-w)^m`.
pub fn tube_partition(geo: &LatticeGeometry, q: usize, width: usize, tile: usize, axis: usize) -> Result<Partition> {
    let dim = geo.dim();
    let l = geo.size();
    if q < 1 || q > dim {
        return Err(Error::InvalidParameter(format!("object dimension {q} outside 1..={dim}")));
    }
    if axis >= dim {
        return Err(Error::InvalidParameter(format!("axis {axis} outside 0..{dim}")));
    }
    if width == 0 || tile <= width || tile > l {
        return Err(Error::InvalidParameter(format!(
            "need 0 < width < tile <= L, got width {width}, tile {tile}, L {l}"
        )));
    }
    let extended: Vec<usize> = (0..q).map(|i| (axis + i) % dim).collect();
    let cross: Vec<usize> = (0..dim).filter(|a| !extended.contains(a)).collect();
    let tiles = l / tile;
    let on_grid = |c: usize| {
        let t = (c / tile).min(tiles - 1);
        c - t * tile < width
    };
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); cross.len() + 1];
    for s in 0..geo.num_sites() {
        let c = geo.site_coords(s);
        let grid = cross.iter().filter(|&&a| on_grid(c[a])).count();
        classes[cross.len() - grid].push(s);
    }
    let mut regions: Vec<Region> = classes.into_iter().map(|sites| geo.region_of_sites(sites)).collect();
    let r0 = regions.remove(0);
    let mut metadata = BTreeMap::new();
    metadata.insert("scheme".into(), "tubes".into());
    metadata.insert("object_dim".into(), q.to_string());
    metadata.insert("width".into(), width.to_string());
    metadata.insert("tile".into(), tile.to_string());
    metadata.insert(
        "orientation".into(),
        extended.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
    );
    let p = Partition { r0, regions, metadata };
    p.check_covering()?;
    Ok(p)
}

/// A ball of Chebyshev radius `radius` around a site.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub centre: Vec<usize>,
    pub radius: usize,
}

#[derive(Clone, Debug)]
pub struct RandomCellRegion {
    pub region: Region,
    pub balls: Vec<Ball>,
    pub cell_side: usize,
    pub cells_per_axis: usize,
}

#[derive(Clone, Debug)]
pub enum RandomCellOutcome {
    Success(RandomCellRegion),
    /// Cells (in site-index order of their lowest corner) with no usable ball.
    Failure { empty_cells: Vec<usize>, cell_side: usize },
}

impl RandomCellOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, RandomCellOutcome::Success(_))
    }
}

/// Samples a lost set at rate `p0`, cuts the lattice into cubic cells of side
/// `ceil((c ln n)^(1/D))`, and picks in each cell the first site (in
/// lexicographic order) whose radius-`r` ball is entirely lost and keeps a
/// margin of `ceil((xi + 1) / 2)` sites from the cell boundary, so balls in
/// different cells are more than `xi` apart.
pub fn random_cell_region(
    geo: &LatticeGeometry,
    p0: f64,
    radius: usize,
    cell_constant: f64,
    rng: &mut impl Rng,
) -> Result<RandomCellOutcome> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::InvalidParameter(format!("loss rate {p0} outside [0, 1]")));
    }
    if cell_constant <= 0.0 {
        return Err(Error::InvalidParameter("cell constant must be positive".into()));
    }
    let n = geo.num_qubits();
    let dim = geo.dim();
    let l = geo.size();
    let volume = cell_constant * (n.max(2) as f64).ln();
    let side = (volume.powf(1.0 / dim as f64).ceil() as usize).clamp(1, l);
    let cells_per_axis = (l / side).max(1);
    let margin = (geo.xi() + 1).div_ceil(2);

    let lost: Vec<bool> = (0..n).map(|_| rng.gen_bool(p0)).collect();
    let site_lost: Vec<bool> = (0..geo.num_sites())
        .map(|s| geo.qubits_at_site(s).iter().all(|&q| lost[q]))
        .collect();

    let cell_bounds = |idx: usize| -> (usize, usize) {
        let lo = idx * side;
        let hi = if idx + 1 == cells_per_axis { l } else { lo + side };
        (lo, hi)
    };

    let total_cells = cells_per_axis.pow(dim as u32);
    let mut balls = Vec::new();
    let mut empty = Vec::new();
    for cell in 0..total_cells {
        let idx: Vec<usize> = (0..dim).map(|a| (cell / cells_per_axis.pow(a as u32)) % cells_per_axis).collect();
        let bounds: Vec<(usize, usize)> = idx.iter().map(|&i| cell_bounds(i)).collect();
        let found = first_lost_ball(geo, &site_lost, &bounds, radius, margin);
        match found {
            Some(centre) => balls.push(Ball { centre, radius }),
            None => empty.push(cell),
        }
    }
    if !empty.is_empty() {
        return Ok(RandomCellOutcome::Failure {
            empty_cells: empty,
            cell_side: side,
        });
    }
    let mut region = Region::empty(n);
    for b in &balls {
        region = region.union(&ball_region(geo, b));
    }
    Ok(RandomCellOutcome::Success(RandomCellRegion {
        region,
        balls,
        cell_side: side,
        cells_per_axis,
    }))
}

fn first_lost_ball(
    geo: &LatticeGeometry,
    site_lost: &[bool],
    bounds: &[(usize, usize)],
    radius: usize,
    margin: usize,
) -> Option<Vec<usize>> {
    let dim = geo.dim();
    let pad = radius + margin;
    let ranges: Vec<(usize, usize)> = bounds.iter().map(|&(lo, hi)| (lo + pad, hi.saturating_sub(pad))).collect();
    if ranges.iter().any(|&(lo, hi)| lo >= hi) {
        return None;
    }
    // Enumerate candidate centres with axis D-1 slowest, so the order matches
    // site indices.
    let mut centre: Vec<usize> = ranges.iter().map(|r| r.0).collect();
    loop {
        if ball_sites(geo, &centre, radius).all(|s| site_lost[s]) {
            return Some(centre);
        }
        let mut axis = 0;
        loop {
            if axis == dim {
                return None;
            }
            centre[axis] += 1;
            if centre[axis] < ranges[axis].1 {
                break;
            }
            centre[axis] = ranges[axis].0;
            axis += 1;
        }
    }
}

/// Sites of a ball (non-wrapping offsets are wrapped on periodic axes and
/// clipped otherwise).
fn ball_sites<'a>(geo: &'a LatticeGeometry, centre: &'a [usize], radius: usize) -> impl Iterator<Item = usize> + 'a {
    let dim = geo.dim();
    let l = geo.size() as isize;
    let span = 2 * radius + 1;
    let count = span.pow(dim as u32);
    (0..count).filter_map(move |k| {
        let mut c = Vec::with_capacity(dim);
        let mut rest = k;
        for a in 0..dim {
            let off = (rest % span) as isize - radius as isize;
            rest /= span;
            let v = centre[a] as isize + off;
            let v = if geo.periodic()[a] {
                v.rem_euclid(l)
            } else if (0..l).contains(&v) {
                v
            } else {
                return None;
            };
            c.push(v as usize);
        }
        Some(geo.site_at(&c))
    })
}

pub fn ball_region(geo: &LatticeGeometry, b: &Ball) -> Region {
    geo.region_of_sites(ball_sites(geo, &b.centre, b.radius).collect::<Vec<_>>())
}

/// Fattened skeleton anchored on ball centres. Along each axis the anchor
/// coordinates are the centre coordinates of the balls; a site is near axis
/// `i` when it lies within `width` of an anchor coordinate on that axis.
/// `r0` is the union of the balls; other sites near `D - m` or more axes go to
/// `R_m` (`m >= 1`), with sites near every axis but outside the balls in
/// `R_1`.
pub fn skewed_tiling_from_balls(geo: &LatticeGeometry, balls: &[Ball], width: usize) -> Result<Partition> {
    let dim = geo.dim();
    if balls.is_empty() {
        return Err(Error::InvalidParameter("no balls to anchor the tiling".into()));
    }
    let mut anchors: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for b in balls {
        if b.centre.len() != dim {
            return Err(Error::InvalidParameter("ball centre dimension mismatch".into()));
        }
        for a in 0..dim {
            anchors[a].push(b.centre[a]);
        }
    }
    for a in &mut anchors {
        a.sort_unstable();
        a.dedup();
    }
    let mut r0 = Region::empty(geo.num_qubits());
    for b in balls {
        r0 = r0.union(&ball_region(geo, b));
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); dim];
    for s in 0..geo.num_sites() {
        if geo.qubits_at_site(s).iter().any(|&q| r0.contains(q)) {
            continue;
        }
        let c = geo.site_coords(s);
        let near = (0..dim)
            .filter(|&a| anchors[a].iter().any(|&x| geo.axis_distance(a, c[a], x) <= width))
            .count();
        // near = D, D-1 -> R_1; near = D-m -> R_m; near = 0 -> R_D.
        let m = (dim - near).max(1);
        classes[m - 1].push(s);
    }
    let regions: Vec<Region> = classes.into_iter().map(|sites| geo.region_of_sites(sites)).collect();
    let mut metadata = BTreeMap::new();
    metadata.insert("scheme".into(), "skewed".into());
    metadata.insert("width".into(), width.to_string());
    metadata.insert("balls".into(), balls.len().to_string());
    let p = Partition {
        r0: r0.clone(),
        regions,
        metadata,
    };
    p.check_covering()?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_toric;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn elementary_conjugation() {
        // CNOT: X_c -> X_c X_t, Z_t -> Z_c Z_t
        let (mut x, mut z) = (vec![true, false], vec![false, false]);
        conjugate_symplectic(Elementary::Cnot(0, 1), &mut x, &mut z);
        assert_eq!((x, z), (vec![true, true], vec![false, false]));
        let (mut x, mut z) = (vec![false, false], vec![false, true]);
        conjugate_symplectic(Elementary::Cnot(0, 1), &mut x, &mut z);
        assert_eq!((x, z), (vec![false, false], vec![true, true]));
        // S: X -> Y, H: X <-> Z
        let (mut x, mut z) = (vec![true], vec![false]);
        conjugate_symplectic(Elementary::S(0), &mut x, &mut z);
        assert_eq!((x.clone(), z.clone()), (vec![true], vec![true]));
        conjugate_symplectic(Elementary::H(0), &mut x, &mut z);
        assert_eq!((x, z), (vec![true], vec![true]));
    }

    #[test]
    fn co_sited_gate_has_reach_one() {
        let code = build_toric(4).unwrap();
        let geo = code.geometry().unwrap();
        let c = LocalCircuit::new(32, vec![vec![vec![0, 1]]]).unwrap();
        assert_eq!(circuit_spread(geo, &c), 1);
        let c = LocalCircuit::new(32, vec![vec![vec![0]]]).unwrap();
        assert_eq!(circuit_spread(geo, &c), 0);
    }

    #[test]
    fn random_circuits_are_local_and_sound() {
        let code = build_toric(6).unwrap();
        let geo = code.geometry().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_local_circuit(geo, 3, &mut rng);
        assert_eq!(c.depth(), 3);
        assert!(c.layers().iter().flatten().all(|g| g.len() == 2 && geo.diameter(g) <= 1));
        assert!(circuit_spread(geo, &c) <= 3);
        let r = spread_soundness(geo, 30, 3, &mut rng).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn neighborhood_basics() {
        let code = build_toric(5).unwrap();
        let geo = code.geometry().unwrap();
        let n = code.num_qubits();
        let r = Region::new(n, [0]).unwrap();
        assert_eq!(neighborhood(geo, &r, 0), r);
        // qubit 0 sits at (0, 0); r = 1 gives the 3x3 block of sites, two qubits each
        let b = neighborhood(geo, &r, 1);
        assert_eq!(b.len(), 18);
        for q in b.iter() {
            assert!(geo.distance(0, q) <= 1);
        }
        assert_eq!(neighborhood(geo, &Region::full(n), 2), Region::full(n));
    }

    #[test]
    fn spread_examples() {
        let code = build_toric(4).unwrap();
        let geo = code.geometry().unwrap();
        let n = code.num_qubits();
        let singles = LocalCircuit::new(n, vec![vec![vec![0], vec![5]]]).unwrap();
        assert_eq!(circuit_spread(geo, &singles), 0);
        // qubits 0 (site 0,0) and 2 (site 1,0)
        let pair = LocalCircuit::new(n, vec![vec![vec![0, 2]]]).unwrap();
        assert_eq!(circuit_spread(geo, &pair), 1);
        let two = LocalCircuit::new(n, vec![vec![vec![0, 2]], vec![vec![1, 3]]]).unwrap();
        assert_eq!(circuit_spread(geo, &two), 2);
        assert!(LocalCircuit::new(n, vec![vec![vec![0, 2], vec![2, 4]]]).is_err());
    }

    #[test]
    fn ring_tiling() {
        let coords = (0..12).map(|i| vec![i]).collect();
        let geo = LatticeGeometry::new(1, 12, coords, vec![true], 1).unwrap();
        let p = fattened_tiling(&geo, 6, None).unwrap();
        assert_eq!(p.r0.qubits(), vec![0, 1, 5, 6, 7, 11]);
        assert_eq!(p.regions.len(), 1);
        assert_eq!(p.regions[0].qubits(), vec![2, 3, 4, 8, 9, 10]);
        assert_eq!(connected_components(&geo, &p.r0).len(), 2);
        assert_eq!(connected_components(&geo, &p.regions[0]).len(), 2);
    }

    #[test]
    fn partition_serde_round_trip() {
        let code = build_toric(4).unwrap();
        let p = tube_partition(code.geometry().unwrap(), 1, 1, 2, 0).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        let back: Partition = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
}
