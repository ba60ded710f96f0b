//! Polar quadrature grid aligned with the dyadic generations.
//!
//! Rings sit at Gauss-Legendre nodes of the hyperbolic radial variable
//! `tau = artanh(r)` inside each generation band, so cells shrink like the
//! kernel scale near the boundary. Cell weights are renormalized so every
//! cell carries its exact normalized-area mass; the covered region
//! `|z| <= r_{G_q}` therefore has exact total weight `r_{G_q}^2`.
//!
//! Past the covered region the grid continues with coarse tail bands whose
//! cells are used by kernel-type integrals (projection, Berezin, tent
//! averages, inner products) so that full-disk integrals carry no
//! truncation bias; `L^p` norms of sampled functions restrict to the
//! covered region and report the deficit separately.

use crate::dyadic::{DyadicForest, Kube, KubeId};
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const NODE_BUDGET: usize = 2_000_000;
const MIN_NODES_PER_KUBE: usize = 16;
const GL2: f64 = 0.577_350_269_189_625_8; // 1/sqrt(3)

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridSpec {
    /// Covered-region depth: the main grid spans `|z| <= tanh(G_q theta0)`.
    pub grid_generation: u32,
    /// Angular nodes per deepest-generation arc.
    pub angular_density: u32,
    /// Radial subintervals per generation band (two GL nodes each).
    pub radial_subdivision: u32,
    /// Kernel-type evaluations warn beyond this evaluation radius.
    pub safety_radius: f64,
    /// Coarse bands continuing to the boundary (residual mass ~ 4/2^(G_q+tail)).
    pub tail_bands: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            grid_generation: 10,
            angular_density: 12,
            radial_subdivision: 3,
            safety_radius: 0.9,
            tail_bands: 30,
        }
    }
}

impl GridSpec {
    /// One refinement step: double the angular density and add a radial
    /// subinterval per band.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            angular_density: self.angular_density * 2,
            radial_subdivision: self.radial_subdivision + 1,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Ring {
    pub radius: f64,
    /// Generation band the ring lies in.
    pub band: u32,
    pub ntheta: usize,
    pub dtheta: f64,
    /// Total normalized mass carried by the ring (sum of its cell weights).
    pub mass: f64,
    pub tail: bool,
    pub node_offset: usize,
}

#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub spec: GridSpec,
    pub theta0: f64,
    pub rings: Vec<Ring>,
    /// Node positions; angular index runs fastest within a ring.
    pub z: Vec<Complex64>,
    pub weight: Vec<f64>,
    pub ring_of: Vec<u32>,
    /// Mass of the covered region `|z| <= r_{G_q}` (exact).
    pub covered_mass: f64,
    /// Covered plus tail mass; differs from 1 by the residual past the tail.
    pub total_mass: f64,
    pub truncation_radius: f64,
}

pub fn build_grid(spec: GridSpec, theta0: f64) -> Result<QuadratureGrid> {
    if spec.grid_generation > 14 {
        return Err(Error::GridGenerationTooDeep(spec.grid_generation));
    }
    let mut rings: Vec<Ring> = Vec::new();
    let mut node_count = 0usize;
    let push_band =
        |g: u32, nsub: u32, ntheta: usize, tail: bool, rings: &mut Vec<Ring>, nodes: &mut usize| {
            let lo = g as f64 * theta0;
            let h = theta0 / nsub as f64;
            for i in 0..nsub {
                let a = lo + i as f64 * h;
                let b = a + h;
                let mass = b.tanh().powi(2) - a.tanh().powi(2);
                let mid = 0.5 * (a + b);
                let taus = [mid - 0.5 * h * GL2, mid + 0.5 * h * GL2];
                let js: Vec<f64> = taus
                    .iter()
                    .map(|t| 2.0 * t.tanh() / t.cosh().powi(2))
                    .collect();
                let jsum: f64 = js.iter().sum();
                for (t, j) in taus.iter().zip(&js) {
                    rings.push(Ring {
                        radius: t.tanh(),
                        band: g,
                        ntheta,
                        dtheta: TAU / ntheta as f64,
                        mass: mass * j / jsum,
                        tail,
                        node_offset: *nodes,
                    });
                    *nodes += ntheta;
                }
            }
        };
    for g in 0..spec.grid_generation {
        let ntheta = spec.angular_density as usize * (1usize << g);
        push_band(
            g,
            spec.radial_subdivision,
            ntheta,
            false,
            &mut rings,
            &mut node_count,
        );
    }
    let deepest = spec.angular_density as usize * (1usize << spec.grid_generation);
    for j in 0..spec.tail_bands {
        let ntheta = (deepest >> j).clamp(96, 3072);
        push_band(
            spec.grid_generation + j,
            1,
            ntheta,
            true,
            &mut rings,
            &mut node_count,
        );
    }
    if node_count > NODE_BUDGET {
        return Err(Error::GridBudget {
            nodes: node_count,
            budget: NODE_BUDGET,
        });
    }

    let mut z = Vec::with_capacity(node_count);
    let mut weight = Vec::with_capacity(node_count);
    let mut ring_of = Vec::with_capacity(node_count);
    for (ri, ring) in rings.iter().enumerate() {
        let w = ring.mass / ring.ntheta as f64;
        for j in 0..ring.ntheta {
            let th = (j as f64 + 0.5) * ring.dtheta;
            z.push(Complex64::from_polar(ring.radius, th));
            weight.push(w);
            ring_of.push(ri as u32);
        }
    }
    let covered: f64 = rings.iter().filter(|r| !r.tail).map(|r| r.mass).sum();
    let total: f64 = rings.iter().map(|r| r.mass).sum();
    Ok(QuadratureGrid {
        spec,
        theta0,
        rings,
        z,
        weight,
        ring_of,
        covered_mass: covered,
        total_mass: total,
        truncation_radius: (spec.grid_generation as f64 * theta0).tanh(),
    })
}

impl QuadratureGrid {
    pub fn node_count(&self) -> usize {
        self.z.len()
    }

    pub fn is_tail(&self, node: usize) -> bool {
        self.rings[self.ring_of[node] as usize].tail
    }

    /// Indices of covered-region (non-tail) nodes.
    pub fn main_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.z.len()).filter(move |&i| !self.is_tail(i))
    }

    /// Deepest kube generation at which every kube holds at least 16 main
    /// nodes; tent statistics truncate here.
    pub fn kube_generation_cap(&self) -> u32 {
        self.spec.grid_generation - 1
    }

    /// Count main grid nodes inside a kube (its annulus band and arc).
    pub fn kube_node_count(&self, kube: &Kube) -> usize {
        let mut n = 0;
        for ring in self.rings.iter().filter(|r| !r.tail) {
            if ring.radius <= kube.inner_radius && kube.id.generation > 0 {
                continue;
            }
            if ring.radius > kube.outer_radius {
                continue;
            }
            for j in 0..ring.ntheta {
                let th = (j as f64 + 0.5) * ring.dtheta;
                if kube.id.generation == 0 || kube.arc_contains(th) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Enforce the coverage invariant for kubes up to the cap.
    pub fn validate_coverage(&self, forest: &DyadicForest) -> Result<()> {
        for s in &forest.systems {
            for k in 0..=self.kube_generation_cap().min(forest.params.max_generation) {
                // arcs are congruent; the minimum over j is attained near j=0
                let mut min_nodes = usize::MAX;
                for j in 0..s.kube_count(k).min(4) {
                    let kube = s.kube(KubeId {
                        system: s.index,
                        generation: k,
                        index: j,
                    });
                    min_nodes = min_nodes.min(self.kube_node_count(&kube));
                }
                if min_nodes < MIN_NODES_PER_KUBE {
                    return Err(Error::QuadratureCoverage {
                        generation: k,
                        nodes: min_nodes,
                        required: MIN_NODES_PER_KUBE,
                    });
                }
            }
        }
        Ok(())
    }

    /// Full-mass integral of node values against cell weights (all cells,
    /// covered and tail).
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        values
            .iter()
            .zip(&self.weight)
            .map(|(v, w)| v * w)
            .sum()
    }

    /// `<f, g> = integral of f * conj(g)` over the whole disk surrogate.
    pub fn inner_product(&self, f: &[Complex64], g: &[Complex64]) -> Complex64 {
        f.iter()
            .zip(g)
            .zip(&self.weight)
            .map(|((a, b), w)| a * b.conj() * w)
            .sum()
    }
}

/// Per-ring cumulative sums of weighted node values, answering exact
/// integrals over sector annuli with fractional end cells.
pub struct RingPrefix {
    /// `cum[ring][j+1] - cum[ring][j]` is the weighted value of cell `j`.
    cum: Vec<Vec<f64>>,
}

impl RingPrefix {
    /// `values[i]` must already include the cell weight.
    pub fn build(grid: &QuadratureGrid, values: &[f64]) -> RingPrefix {
        let cum = grid
            .rings
            .iter()
            .map(|ring| {
                let mut c = Vec::with_capacity(ring.ntheta + 1);
                c.push(0.0);
                let mut acc = 0.0;
                for j in 0..ring.ntheta {
                    acc += values[ring.node_offset + j];
                    c.push(acc);
                }
                c
            })
            .collect();
        RingPrefix { cum }
    }

    fn ring_total(&self, ring: usize) -> f64 {
        *self.cum[ring].last().unwrap()
    }

    /// Integral over `[x, y)` in angle on one ring, `0 <= x <= y <= 2pi`,
    /// splitting fractional coverage of the end cells.
    fn segment(&self, grid: &QuadratureGrid, ring: usize, x: f64, y: f64) -> f64 {
        if y <= x {
            return 0.0;
        }
        let r = &grid.rings[ring];
        let n = r.ntheta;
        let dt = r.dtheta;
        let cum = &self.cum[ring];
        let cell = |j: usize| cum[j + 1] - cum[j];
        let jx = ((x / dt).floor() as usize).min(n - 1);
        let jy_raw = (y / dt).floor() as usize;
        if jy_raw >= n {
            // y lands at 2pi
            let fx = x / dt - jx as f64;
            return cell(jx) * (1.0 - fx) + (cum[n] - cum[jx + 1]);
        }
        let jy = jy_raw;
        if jx == jy {
            return cell(jx) * (y - x) / dt;
        }
        let fx = x / dt - jx as f64;
        let fy = y / dt - jy as f64;
        cell(jx) * (1.0 - fx) + (cum[jy] - cum[jx + 1]) + cell(jy) * fy
    }

    /// Integral over the arc `[start, start+width)` (mod 2pi) on one ring.
    pub fn arc(&self, grid: &QuadratureGrid, ring: usize, start: f64, width: f64) -> f64 {
        if width >= TAU - 1e-15 {
            return self.ring_total(ring);
        }
        let a = start.rem_euclid(TAU);
        let b = a + width;
        if b <= TAU {
            self.segment(grid, ring, a, b)
        } else {
            self.segment(grid, ring, a, TAU) + self.segment(grid, ring, 0.0, b - TAU)
        }
    }

    /// Integral over the sector annulus `{r > inner} x arc`, i.e. a dyadic
    /// tent when `inner` is a generation radius. Bands are half-open
    /// `(r_k, r_{k+1}]`, so rings at radius <= `inner` are excluded.
    pub fn sector_annulus(
        &self,
        grid: &QuadratureGrid,
        inner: f64,
        start: f64,
        width: f64,
    ) -> f64 {
        let mut acc = 0.0;
        for (ri, ring) in grid.rings.iter().enumerate() {
            if ring.radius > inner {
                acc += self.arc(grid, ri, start, width);
            }
        }
        acc
    }
}

/// Tent integrals of one weighted field over every tent up to a generation
/// cap, per system: `table[system][k][j]`.
pub struct TentTable {
    pub per: Vec<Vec<Vec<f64>>>,
    pub cap: u32,
}

impl TentTable {
    pub fn get(&self, id: KubeId) -> f64 {
        self.per[id.system as usize][id.generation as usize][id.index as usize]
    }
}

/// Builds tent integrals bottom-up: a tent is its generation band plus its
/// children's tents, and child arcs tile the parent arc exactly.
pub fn tent_integrals(
    grid: &QuadratureGrid,
    prefix: &RingPrefix,
    forest: &DyadicForest,
    cap: u32,
) -> TentTable {
    let cap = cap
        .min(forest.params.max_generation)
        .min(grid.kube_generation_cap());
    let mut per = Vec::with_capacity(forest.systems.len());
    for s in &forest.systems {
        let m = s.branching as u64;
        let mut tables: Vec<Vec<f64>> = (0..=cap)
            .map(|k| vec![0.0; s.kube_count(k) as usize])
            .collect();
        // deepest level: full radial reach
        let kd = cap;
        let wd = s.arc_width(kd);
        let inner = s.radii[kd as usize];
        for j in 0..s.kube_count(kd) {
            let start = s.shift + j as f64 * wd;
            tables[kd as usize][j as usize] = prefix.sector_annulus(grid, inner, start, wd);
        }
        // shallower levels: own band plus children
        for k in (0..cap).rev() {
            let w = s.arc_width(k);
            let inner = s.radii[k as usize];
            let outer = s.radii[k as usize + 1];
            for j in 0..s.kube_count(k) {
                let start = s.shift + j as f64 * w;
                let mut acc = 0.0;
                for (ri, ring) in grid.rings.iter().enumerate() {
                    if ring.radius > inner && ring.radius <= outer {
                        acc += prefix.arc(grid, ri, start, w);
                    }
                }
                for c in 0..m {
                    acc += tables[k as usize + 1][(j * m + c) as usize];
                }
                tables[k as usize][j as usize] = acc;
            }
        }
        per.push(tables);
    }
    TentTable { per, cap }
}

/// Per-node, per-system ancestor chains through the forest, up to the
/// tent-statistics cap. `chain[sys][node][k]` is the angular index of the
/// generation-`k` tent containing the node (`k <= depth[sys][node]`).
pub struct NodeChains {
    pub cap: u32,
    /// generation of the node's kube, clamped to the cap
    pub depth: Vec<Vec<u32>>,
    chain: Vec<Vec<u64>>,
    stride: usize,
}

impl NodeChains {
    pub fn build(grid: &QuadratureGrid, forest: &DyadicForest, cap: u32) -> NodeChains {
        let cap = cap
            .min(forest.params.max_generation)
            .min(grid.kube_generation_cap());
        let stride = cap as usize + 1;
        let mut depth = Vec::new();
        let mut chain = Vec::new();
        for s in &forest.systems {
            let mut d = vec![0u32; grid.node_count()];
            let mut c = vec![0u64; grid.node_count() * stride];
            for (i, z) in grid.z.iter().enumerate() {
                let band = grid.rings[grid.ring_of[i] as usize].band.min(cap);
                let deep = s.kube_id_at(band, z.arg());
                d[i] = band;
                for k in 0..=band {
                    c[i * stride + k as usize] = s.ancestor(deep, k).index;
                }
            }
            depth.push(d);
            chain.push(c);
        }
        NodeChains {
            cap,
            depth,
            chain,
            stride,
        }
    }

    pub fn ancestor_index(&self, system: usize, node: usize, generation: u32) -> u64 {
        self.chain[system][node * self.stride + generation as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormMode {
    /// `(integral |f|^p sigma)^{1/p}` over the covered region.
    Strong(f64),
    /// `sup_t t * sigma({|f| > t})`, exact for the discrete node measure.
    Weak,
    /// Strong norm restricted to `|z| > tail_radius`.
    StrongTail { p: f64, tail_radius: f64 },
    /// Weak norm restricted to `|z| > tail_radius`.
    WeakTail { tail_radius: f64 },
}

/// Weighted norms of a sampled function over the covered region.
/// `sigma` holds plain weight values per node (not premultiplied).
pub fn norm(grid: &QuadratureGrid, f: &[Complex64], sigma: &[f64], mode: NormMode) -> f64 {
    let select = |tail_radius: f64| {
        grid.main_nodes()
            .filter(move |&i| grid.z[i].norm() > tail_radius)
    };
    match mode {
        NormMode::Strong(p) => select(0.0)
            .map(|i| f[i].norm().powf(p) * sigma[i] * grid.weight[i])
            .sum::<f64>()
            .powf(1.0 / p),
        NormMode::StrongTail { p, tail_radius } => select(tail_radius)
            .map(|i| f[i].norm().powf(p) * sigma[i] * grid.weight[i])
            .sum::<f64>()
            .powf(1.0 / p),
        NormMode::Weak | NormMode::WeakTail { .. } => {
            let tr = match mode {
                NormMode::WeakTail { tail_radius } => tail_radius,
                _ => 0.0,
            };
            let mut lv: Vec<(f64, f64)> = select(tr)
                .map(|i| (f[i].norm(), sigma[i] * grid.weight[i]))
                .filter(|(v, _)| *v > 0.0)
                .collect();
            lv.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            let mut mass = 0.0;
            let mut best: f64 = 0.0;
            // sup_t t*sigma({|f|>t}) is attained in the limit t -> v_i^- with
            // the closed superlevel set {|f| >= v_i}
            for (v, m) in lv {
                mass += m;
                best = best.max(v * mass);
            }
            best
        }
    }
}

/// A sampled function on the grid with a symbolic descriptor, which records
/// how it may be evaluated off-grid and how its angular spectrum decays.
#[derive(Debug, Clone)]
pub struct GridFunction {
    pub values: Vec<Complex64>,
    pub kind: FnKind,
}

#[derive(Debug, Clone)]
pub enum FnKind {
    Constant(Complex64),
    Monomial(u32),
    ConjMonomial(u32),
    NormKernel { w: Complex64, p: f64 },
    AnnulusIndicator { r1: f64, r2: f64 },
    KubeIndicator(KubeId),
    Custom(String),
}

impl GridFunction {
    pub fn sample(grid: &QuadratureGrid, kind: FnKind) -> GridFunction {
        let eval = |z: Complex64| -> Complex64 {
            match &kind {
                FnKind::Constant(c) => *c,
                FnKind::Monomial(m) => z.powu(*m),
                FnKind::ConjMonomial(m) => z.conj().powu(*m),
                FnKind::NormKernel { w, p } => crate::geometry::norm_kernel(*w, z, *p),
                FnKind::AnnulusIndicator { r1, r2 } => {
                    let r = z.norm();
                    Complex64::new(if r > *r1 && r < *r2 { 1.0 } else { 0.0 }, 0.0)
                }
                FnKind::KubeIndicator(_) => unreachable!("use sample_kube"),
                FnKind::Custom(_) => unreachable!("use from_values"),
            }
        };
        let values = grid.z.iter().map(|&z| eval(z)).collect();
        GridFunction { values, kind }
    }

    pub fn sample_kube(grid: &QuadratureGrid, forest: &DyadicForest, id: KubeId) -> GridFunction {
        let kube = forest.kube(id);
        let values = grid
            .z
            .iter()
            .map(|&z| Complex64::new(if kube.contains(z) { 1.0 } else { 0.0 }, 0.0))
            .collect();
        GridFunction {
            values,
            kind: FnKind::KubeIndicator(id),
        }
    }

    pub fn from_values(values: Vec<Complex64>, name: &str) -> GridFunction {
        GridFunction {
            values,
            kind: FnKind::Custom(name.to_string()),
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FnKind::Constant(c) => format!("const({c})"),
            FnKind::Monomial(m) => format!("w^{m}"),
            FnKind::ConjMonomial(m) => format!("conj(w)^{m}"),
            FnKind::NormKernel { w, p } => format!("k_({:.3},{:.3})^({p})", w.re, w.im),
            FnKind::AnnulusIndicator { r1, r2 } => format!("chi_annulus({r1},{r2})"),
            FnKind::KubeIndicator(id) => {
                format!("chi_kube(l{},k{},j{})", id.system, id.generation, id.index)
            }
            FnKind::Custom(n) => n.clone(),
        }
    }

    /// Geometric decay radius of the angular moment sequence, when known.
    /// `Some(q)`: moment `m` is `O(q^m)`; `None`: only `O(1/m)` decay, so
    /// bulk series evaluation is restricted to the safety radius.
    pub fn moment_decay(&self) -> Option<f64> {
        match &self.kind {
            FnKind::Constant(_) => Some(0.0),
            FnKind::Monomial(_) | FnKind::ConjMonomial(_) => Some(0.0),
            FnKind::AnnulusIndicator { .. } => Some(0.0),
            FnKind::NormKernel { w, .. } => Some(w.norm()),
            FnKind::KubeIndicator(_) | FnKind::Custom(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{build_forest, DyadicParams};
    use approx::assert_abs_diff_eq;

    fn small_grid() -> QuadratureGrid {
        build_grid(
            GridSpec {
                grid_generation: 6,
                angular_density: 8,
                radial_subdivision: 2,
                safety_radius: 0.9,
                tail_bands: 20,
            },
            0.5 * 2.0f64.ln(),
        )
        .unwrap()
    }

    #[test]
    fn covered_mass_is_exact() {
        let g = build_grid(GridSpec::default(), 0.5 * 2.0f64.ln()).unwrap();
        let r10 = (10.0 * 0.5 * 2.0f64.ln()).tanh();
        assert_abs_diff_eq!(g.covered_mass, r10 * r10, epsilon = 1e-10);
        let expect = 1.0 - 4.0 * 1024.0 / (1025.0f64 * 1025.0);
        assert_abs_diff_eq!(g.covered_mass, expect, epsilon = 1e-12);
        assert!((g.total_mass - 1.0).abs() < 1e-8);
        assert!(g.node_count() < 200_000);
    }

    #[test]
    fn kube_coverage_invariant() {
        let g = build_grid(GridSpec::default(), 0.5 * 2.0f64.ln()).unwrap();
        let f = build_forest(DyadicParams::default(), 2).unwrap();
        g.validate_coverage(&f).unwrap();
        // generation-8 kubes hold at least 16 nodes
        let kube = f.kube(KubeId {
            system: 0,
            generation: 8,
            index: 3,
        });
        assert!(g.kube_node_count(&kube) >= 16);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            build_grid(
                GridSpec {
                    grid_generation: 15,
                    ..Default::default()
                },
                0.5 * 2.0f64.ln()
            ),
            Err(Error::GridGenerationTooDeep(15))
        ));
        assert!(matches!(
            build_grid(
                GridSpec {
                    grid_generation: 14,
                    angular_density: 200,
                    ..Default::default()
                },
                0.5 * 2.0f64.ln()
            ),
            Err(Error::GridBudget { .. })
        ));
    }

    #[test]
    fn ring_prefix_tent_sums_match_closed_forms() {
        let grid = small_grid();
        let forest = build_forest(
            DyadicParams {
                max_generation: 5,
                ..Default::default()
            },
            2,
        )
        .unwrap();
        let weighted: Vec<f64> = grid.weight.clone();
        let prefix = RingPrefix::build(&grid, &weighted);
        let table = tent_integrals(&grid, &prefix, &forest, 5);
        for s in &forest.systems {
            for k in 0..=table.cap {
                for j in 0..s.kube_count(k) {
                    let id = KubeId {
                        system: s.index,
                        generation: k,
                        index: j,
                    };
                    // mass of the tent within the grid extent
                    let expect = s.tent_measure(k) - s.arc_width(k) / TAU * residual(&grid);
                    assert_abs_diff_eq!(table.get(id), expect, epsilon = 1e-9);
                }
            }
        }
    }

    fn residual(grid: &QuadratureGrid) -> f64 {
        1.0 - grid.total_mass
    }

    #[test]
    fn sector_annulus_fractional_ends() {
        let grid = small_grid();
        let weighted: Vec<f64> = grid.weight.clone();
        let prefix = RingPrefix::build(&grid, &weighted);
        // arbitrary arc: mass of {r > r0} x arc must equal (width/2pi)(1-r0^2)
        for (start, width) in [(0.1, 0.7), (6.0, 1.3), (3.3, 0.02)] {
            let r0 = (2.0 * 0.5 * 2.0f64.ln()).tanh();
            let got = prefix.sector_annulus(&grid, r0, start, width);
            let expect = width / TAU * (1.0 - r0 * r0 - residual(&grid));
            assert_abs_diff_eq!(got, expect, epsilon = 1e-9);
        }
    }

    #[test]
    fn norms_on_grid_measure() {
        let grid = small_grid();
        let one = GridFunction::sample(&grid, FnKind::Constant(Complex64::new(1.0, 0.0)));
        let sigma = vec![1.0; grid.node_count()];
        let s2 = norm(&grid, &one.values, &sigma, NormMode::Strong(2.0));
        assert_abs_diff_eq!(s2, grid.covered_mass.sqrt(), epsilon = 1e-12);

        // indicator: weak norm equals its measure
        let ind = GridFunction::sample(
            &grid,
            FnKind::AnnulusIndicator {
                r1: 0.2,
                r2: 0.5,
            },
        );
        let wk = norm(&grid, &ind.values, &sigma, NormMode::Weak);
        let mass: f64 = grid
            .main_nodes()
            .filter(|&i| ind.values[i].re > 0.0)
            .map(|i| grid.weight[i])
            .sum();
        assert_abs_diff_eq!(wk, mass, epsilon = 1e-14);

        // Chebyshev: weak <= strong(1)
        let mut vals = one.values.clone();
        for (i, v) in vals.iter_mut().enumerate() {
            *v = Complex64::new((i % 17) as f64 / 7.0 + 0.1, 0.0);
        }
        let f = GridFunction::from_values(vals, "ramp");
        let w = norm(&grid, &f.values, &sigma, NormMode::Weak);
        let s1 = norm(&grid, &f.values, &sigma, NormMode::Strong(1.0));
        assert!(w <= s1 + 1e-12);
    }
}
