//! Dyadic kube/tent systems on the disk.
//!
//! A system of generation step `theta0` slices the disk into annuli at the
//! hyperbolic radii `r_k = tanh(k*theta0)` and halves boundary arcs once per
//! generation (caliber `e^{-2*theta0} = 1/2` for the default step, giving an
//! `m`-ary tree for integer `m = e^{2*theta0}`). A kube is one annulus
//! sector; its tent is the kube together with all descendants, which for the
//! disk is exactly the sector annulus reaching the boundary. A forest holds
//! `M` rotated copies of the system so that every Carleson tent is contained
//! in some dyadic tent of comparable measure.
//!
//! All cell measures are closed forms in the normalized area measure
//! (total mass 1): tents at generation `k` have measure `4/(m^k+1)^2`.

use crate::error::{Error, Result};
use crate::geometry::carleson_tent_measure;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DyadicParams {
    pub dimension: u32,
    /// Hyperbolic generation step; default `(ln 2)/2` (caliber 1/2).
    pub theta0: f64,
    /// Deepest generation materialized; suprema over the forest truncate here.
    pub max_generation: u32,
}

impl Default for DyadicParams {
    fn default() -> Self {
        DyadicParams {
            dimension: 1,
            theta0: 0.5 * 2.0f64.ln(),
            max_generation: 12,
        }
    }
}

impl DyadicParams {
    pub fn caliber(&self) -> f64 {
        (-2.0 * self.theta0).exp()
    }

    /// Children per kube: the reciprocal caliber, which must be an integer.
    pub fn branching(&self) -> Result<u32> {
        let m = (2.0 * self.theta0).exp();
        let rounded = m.round();
        if (m - rounded).abs() > 1e-9 * m || rounded < 2.0 {
            return Err(Error::UnsupportedCaliber(self.caliber()));
        }
        Ok(rounded as u32)
    }
}

/// Identifies a kube as (system, generation, angular index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KubeId {
    pub system: u8,
    pub generation: u32,
    pub index: u64,
}

/// One annulus-sector cell with its closed-form geometry.
#[derive(Debug, Clone, Serialize)]
pub struct Kube {
    pub id: KubeId,
    /// Arc start angle in `[0, 2pi)`; the arc is `[start, start+width)`.
    pub arc_start: f64,
    pub arc_width: f64,
    /// Radial band `(inner_radius, outer_radius]`; generation 0 includes 0.
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub center: Complex64,
    pub kube_measure: f64,
    pub tent_measure: f64,
}

impl Kube {
    /// The tent over this kube: `{inner_radius < |z| < 1} x arc`.
    pub fn tent_contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if r <= self.inner_radius && self.id.generation > 0 {
            return false;
        }
        if self.id.generation == 0 {
            return true; // root tent is the whole disk
        }
        self.arc_contains(z.arg().rem_euclid(TAU))
    }

    pub fn arc_contains(&self, theta: f64) -> bool {
        let rel = (theta - self.arc_start).rem_euclid(TAU);
        rel < self.arc_width
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        let radial = if self.id.generation == 0 {
            r <= self.outer_radius
        } else {
            r > self.inner_radius && r <= self.outer_radius
        };
        radial && (self.id.generation == 0 || self.arc_contains(z.arg().rem_euclid(TAU)))
    }
}

/// One rotated dyadic system: a full `m`-ary tree of kubes up to the
/// truncation generation.
#[derive(Debug, Clone, Serialize)]
pub struct DyadicSystem {
    pub index: u8,
    /// Rotation of the boundary grid, in radians.
    pub shift: f64,
    pub branching: u32,
    pub theta0: f64,
    pub max_generation: u32,
    /// `radii[k] = tanh(k*theta0)`, for `k = 0..=max_generation+1`.
    pub radii: Vec<f64>,
}

impl DyadicSystem {
    pub fn kube_count(&self, generation: u32) -> u64 {
        (self.branching as u64).pow(generation)
    }

    pub fn arc_width(&self, generation: u32) -> f64 {
        TAU / self.kube_count(generation) as f64
    }

    /// Normalized measure of a generation-`k` tent: `4/(m^k+1)^2`.
    pub fn tent_measure(&self, generation: u32) -> f64 {
        let mk = (self.branching as f64).powi(generation as i32);
        4.0 / ((mk + 1.0) * (mk + 1.0))
    }

    /// Normalized measure of a generation-`k` kube: tent minus child tents.
    pub fn kube_measure(&self, generation: u32) -> f64 {
        self.tent_measure(generation) - self.branching as f64 * self.tent_measure(generation + 1)
    }

    /// Modulus of kube centers at generation `k`:
    /// `(e^{2(k+1/2)theta0} - 1)/(e^{2(k+1/2)theta0} + 1)`.
    pub fn center_modulus(&self, generation: u32) -> f64 {
        let s = (2.0 * (generation as f64 + 0.5) * self.theta0).exp();
        (s - 1.0) / (s + 1.0)
    }

    pub fn kube(&self, id: KubeId) -> Kube {
        debug_assert_eq!(id.system, self.index);
        let k = id.generation;
        let width = self.arc_width(k);
        let start = (self.shift + id.index as f64 * width).rem_euclid(TAU);
        let mid = start + width / 2.0;
        Kube {
            id,
            arc_start: start,
            arc_width: width,
            inner_radius: self.radii[k as usize],
            outer_radius: self.radii[k as usize + 1],
            center: Complex64::from_polar(self.center_modulus(k), mid.rem_euclid(TAU)),
            kube_measure: self.kube_measure(k),
            tent_measure: self.tent_measure(k),
        }
    }

    pub fn parent(&self, id: KubeId) -> Option<KubeId> {
        (id.generation > 0).then(|| KubeId {
            system: id.system,
            generation: id.generation - 1,
            index: id.index / self.branching as u64,
        })
    }

    pub fn children(&self, id: KubeId) -> Vec<KubeId> {
        let m = self.branching as u64;
        (0..m)
            .map(|c| KubeId {
                system: id.system,
                generation: id.generation + 1,
                index: id.index * m + c,
            })
            .collect()
    }

    /// Generation band of a modulus: `r_k < |z| <= r_{k+1}` (generation 0
    /// includes the origin). Errors past the truncation depth.
    pub fn generation_of_modulus(&self, r: f64) -> Result<u32> {
        let deepest = self.max_generation as usize;
        if r > self.radii[deepest + 1] {
            return Err(Error::OutOfTruncation {
                modulus: r,
                max_generation: self.max_generation,
            });
        }
        // radii is sorted; find first k with r <= radii[k+1]
        let mut lo = 0usize;
        let mut hi = deepest;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if r <= self.radii[mid + 1] {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(lo as u32)
    }

    /// The unique kube containing `z`. Half-open conventions (radial
    /// `(r_k, r_{k+1}]`, angular `[a, b)`) make this deterministic.
    pub fn locate(&self, z: Complex64) -> Result<KubeId> {
        let k = self.generation_of_modulus(z.norm())?;
        Ok(self.kube_id_at(k, z.arg()))
    }

    /// Kube id at a prescribed generation for a point direction.
    pub fn kube_id_at(&self, generation: u32, theta: f64) -> KubeId {
        let count = self.kube_count(generation);
        let rel = (theta - self.shift).rem_euclid(TAU);
        let mut j = (rel / self.arc_width(generation)).floor() as u64;
        if j >= count {
            j = count - 1;
        }
        KubeId {
            system: self.index,
            generation,
            index: j,
        }
    }

    /// Ancestor of `id` at a shallower generation.
    pub fn ancestor(&self, id: KubeId, generation: u32) -> KubeId {
        debug_assert!(generation <= id.generation);
        KubeId {
            system: id.system,
            generation,
            index: id.index / (self.branching as u64).pow(id.generation - generation),
        }
    }

    /// True if the generation-`k` arc `[shift + j w, shift + (j+1) w)` contains
    /// the open angular window `(lo, hi)` (no grid cut strictly inside).
    fn arc_fits_window(&self, generation: u32, lo: f64, hi: f64) -> Option<u64> {
        if generation == 0 {
            return Some(0); // full circle
        }
        let width = self.arc_width(generation);
        if hi - lo > width {
            return None;
        }
        let jf = ((lo - self.shift) / width).floor();
        let next_cut = self.shift + (jf + 1.0) * width;
        if next_cut >= hi - 1e-15 {
            let count = self.kube_count(generation);
            let j = (jf as i64).rem_euclid(count as i64) as u64;
            Some(j)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DyadicForest {
    pub params: DyadicParams,
    pub systems: Vec<DyadicSystem>,
}

/// Sparseness and doubling constants of a truncated forest, with the
/// comparability window between tent measures and kernel volume.
#[derive(Debug, Clone, Serialize)]
pub struct StructureConstants {
    /// `rho = max_K (1 - |K|/|tent K|)`; kube measure >= (1-rho) tent measure.
    pub rho: f64,
    pub rho_witness_generation: u32,
    /// `alpha = max |tent K| / |tent K'|` over parent/child pairs.
    pub alpha: f64,
    pub alpha_witness_generation: u32,
    pub kube_tent_ratio_min: f64,
    pub kube_tent_ratio_max: f64,
    /// Range of `|tent K| / (1-|c_K|^2)^(n+1)` over generations <= G.
    pub tent_kernel_ratio_min: f64,
    pub tent_kernel_ratio_max: f64,
    pub truncation_generation: u32,
}

/// Builds `systems` rotated dyadic systems. The second system is shifted by
/// one third of the generation-1 arc, which empirically suffices for tent
/// approximation on the disk; further systems subdivide the same offset.
pub fn build_forest(params: DyadicParams, systems: u32) -> Result<DyadicForest> {
    if params.dimension != 1 {
        return Err(Error::UnsupportedDimension(params.dimension));
    }
    let m = params.branching()?;
    assert!(systems >= 1);
    let radii: Vec<f64> = (0..=params.max_generation + 1)
        .map(|k| (k as f64 * params.theta0).tanh())
        .collect();
    let gen1_arc = TAU / m as f64;
    let sys = (0..systems)
        .map(|l| DyadicSystem {
            index: l as u8,
            shift: l as f64 * gen1_arc / (systems as f64 + 1.0),
            branching: m,
            theta0: params.theta0,
            max_generation: params.max_generation,
            radii: radii.clone(),
        })
        .collect();
    Ok(DyadicForest {
        params,
        systems: sys,
    })
}

impl DyadicForest {
    pub fn system(&self, l: u8) -> &DyadicSystem {
        &self.systems[l as usize]
    }

    pub fn kube(&self, id: KubeId) -> Kube {
        self.systems[id.system as usize].kube(id)
    }

    /// All kube ids of generation <= `max_generation` across all systems.
    pub fn kube_ids(&self, max_generation: u32) -> Vec<KubeId> {
        let mut out = Vec::new();
        for s in &self.systems {
            for k in 0..=max_generation.min(s.max_generation) {
                for j in 0..s.kube_count(k) {
                    out.push(KubeId {
                        system: s.index,
                        generation: k,
                        index: j,
                    });
                }
            }
        }
        out
    }

    pub fn structure_constants(&self, max_generation: u32) -> StructureConstants {
        let g = max_generation.min(self.params.max_generation);
        let s = &self.systems[0];
        let e = (self.params.dimension + 1) as i32;
        let mut rho = f64::MIN;
        let mut rho_k = 0;
        let mut alpha = f64::MIN;
        let mut alpha_k = 0;
        let mut kt = (f64::MAX, f64::MIN);
        let mut tk = (f64::MAX, f64::MIN);
        for k in 0..=g {
            let tent = s.tent_measure(k);
            let ratio = s.kube_measure(k) / tent;
            if 1.0 - ratio > rho {
                rho = 1.0 - ratio;
                rho_k = k;
            }
            let dbl = tent / s.tent_measure(k + 1);
            if dbl > alpha {
                alpha = dbl;
                alpha_k = k;
            }
            kt = (kt.0.min(ratio), kt.1.max(ratio));
            let kernel_vol = (1.0 - s.center_modulus(k).powi(2)).powi(e);
            let tr = tent / kernel_vol;
            tk = (tk.0.min(tr), tk.1.max(tr));
        }
        StructureConstants {
            rho,
            rho_witness_generation: rho_k,
            alpha,
            alpha_witness_generation: alpha_k,
            kube_tent_ratio_min: kt.0,
            kube_tent_ratio_max: kt.1,
            tent_kernel_ratio_min: tk.0,
            tent_kernel_ratio_max: tk.1,
            truncation_generation: g,
        }
    }

    /// Minimal-measure dyadic tent containing the Carleson tent over `z`,
    /// searched across all systems, together with the measure ratio
    /// `|tent| / |T_z|`.
    ///
    /// Containment is checked through the sector-annulus hull of `T_z`:
    /// inner radius `|z|` and angular half-width `arcsin(1-|z|)`.
    pub fn approx_tent(&self, z: Complex64) -> Result<(KubeId, f64)> {
        let r = z.norm();
        if r == 0.0 {
            return Ok((
                KubeId {
                    system: 0,
                    generation: 0,
                    index: 0,
                },
                1.0,
            ));
        }
        let t = 1.0 - r;
        let halfw = t.min(1.0).asin();
        let theta = z.arg().rem_euclid(TAU);
        let (lo, hi) = (theta - halfw, theta + halfw);
        let mut best: Option<(KubeId, f64)> = None;
        for s in &self.systems {
            for k in (0..=s.max_generation).rev() {
                if s.radii[k as usize] > r {
                    continue;
                }
                if let Some(j) = s.arc_fits_window(k, lo, hi) {
                    let measure = s.tent_measure(k);
                    if best.map_or(true, |(_, m)| measure < m) {
                        best = Some((
                            KubeId {
                                system: s.index,
                                generation: k,
                                index: j,
                            },
                            measure,
                        ));
                    }
                    break; // deeper generations in this system cannot fit
                }
            }
        }
        match best {
            Some((id, measure)) => Ok((id, measure / carleson_tent_measure(r))),
            None => Err(Error::TentNotFound {
                apex_modulus: r,
                max_generation: self.params.max_generation,
            }),
        }
    }

    /// JSON document with parameters, per-generation arc endpoints, and tree
    /// links, sufficient to rebuild the forest byte-for-byte.
    pub fn to_json_document(&self, max_generation: u32) -> serde_json::Value {
        let g = max_generation.min(self.params.max_generation);
        let systems: Vec<_> = self
            .systems
            .iter()
            .map(|s| {
                let generations: Vec<_> = (0..=g)
                    .map(|k| {
                        let width = s.arc_width(k);
                        let count = s.kube_count(k);
                        let endpoints: Vec<f64> = (0..count)
                            .map(|j| (s.shift + j as f64 * width).rem_euclid(TAU))
                            .collect();
                        serde_json::json!({
                            "generation": k,
                            "kube_count": count,
                            "arc_width": width,
                            "arc_endpoints": endpoints,
                            "inner_radius": s.radii[k as usize],
                            "outer_radius": s.radii[k as usize + 1],
                            "tent_measure": s.tent_measure(k),
                            "kube_measure": s.kube_measure(k),
                            "center_modulus": s.center_modulus(k),
                            "parent_of_j": "j / branching",
                            "children_of_j": "branching*j .. branching*(j+1)",
                        })
                    })
                    .collect();
                serde_json::json!({
                    "index": s.index,
                    "shift": s.shift,
                    "branching": s.branching,
                    "generations": generations,
                })
            })
            .collect();
        serde_json::json!({
            "params": self.params,
            "caliber": self.params.caliber(),
            "systems": systems,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn forest() -> DyadicForest {
        build_forest(DyadicParams::default(), 2).unwrap()
    }

    #[test]
    fn radii_are_rational_closed_forms() {
        let f = forest();
        let s = f.system(0);
        for k in 0..=13u32 {
            let p = 2.0f64.powi(k as i32);
            assert_abs_diff_eq!(s.radii[k as usize], (p - 1.0) / (p + 1.0), epsilon = 1e-14);
        }
        assert_abs_diff_eq!(s.radii[1], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.radii[2], 3.0 / 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.radii[3], 7.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn kube_counts_halve_arcs() {
        let s = forest().systems[0].clone();
        for k in 0..=12u32 {
            assert_eq!(s.kube_count(k), 1u64 << k);
        }
    }

    #[test]
    fn center_modulus_at_root() {
        let s = &forest().systems[0];
        assert_abs_diff_eq!(
            s.center_modulus(0),
            3.0 - 2.0 * 2.0f64.sqrt(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn tent_and_kube_measures() {
        let s = &forest().systems[0];
        assert_abs_diff_eq!(s.tent_measure(0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.tent_measure(1), 4.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.tent_measure(2), 4.0 / 25.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.kube_measure(1), 28.0 / 225.0, epsilon = 1e-15);
        // sum rule: kube + children tents = tent, exactly
        for k in 0..=12u32 {
            let lhs = s.kube_measure(k) + 2.0 * s.tent_measure(k + 1);
            assert_abs_diff_eq!(lhs, s.tent_measure(k), epsilon = 1e-15);
        }
    }

    #[test]
    fn structure_constants_closed_forms() {
        let f = forest();
        let sc = f.structure_constants(12);
        assert_abs_diff_eq!(sc.rho, 8.0 / 9.0, epsilon = 1e-13);
        assert_eq!(sc.rho_witness_generation, 0);
        let expect = (8193.0f64 / 4097.0).powi(2);
        assert_abs_diff_eq!(sc.alpha, expect, epsilon = 1e-12);
        assert!(sc.alpha <= 4.0);
        assert_eq!(sc.alpha_witness_generation, 12);
        // doubling at k=0 is 9/4
        assert_abs_diff_eq!(
            f.system(0).tent_measure(0) / f.system(0).tent_measure(1),
            2.25,
            epsilon = 1e-14
        );
        // comparability window of |tent| / (1-|c|^2)^2 stays within factor 4
        assert!(sc.tent_kernel_ratio_max / sc.tent_kernel_ratio_min < 4.0);
        // monotone in truncation
        let sc6 = f.structure_constants(6);
        assert!(sc6.rho <= sc.rho + 1e-15);
        assert!(sc6.alpha <= sc.alpha + 1e-15);
        assert!(sc.rho <= 8.0 / 9.0 + 1e-15 && sc.alpha <= 4.0);
    }

    #[test]
    fn locate_examples() {
        let f = forest();
        let s = f.system(0);
        let root = s.locate(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(root.generation, 0);
        // 1/3 < 0.5 <= 3/5: generation 1, angle 0.1 in [0, pi)
        let id = s.locate(Complex64::from_polar(0.5, 0.1)).unwrap();
        assert_eq!(id.generation, 1);
        assert_eq!(id.index, 0);
        // exactly r_1 belongs to the root cell
        let id = s.locate(Complex64::new(s.radii[1], 0.0)).unwrap();
        assert_eq!(id.generation, 0);
        // past truncation errors
        assert!(s.locate(Complex64::new(0.9999999, 0.0)).is_err());
    }

    #[test]
    fn partition_and_membership() {
        let f = forest();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let r = rng.gen::<f64>() * f.system(0).radii[12];
            let th = rng.gen::<f64>() * TAU;
            let z = Complex64::from_polar(r, th);
            for s in &f.systems {
                let id = s.locate(z).unwrap();
                let kube = s.kube(id);
                assert!(kube.contains(z), "kube {:?} should contain {}", id, z);
                // uniqueness within the generation: neighbors do not contain z
                let count = s.kube_count(id.generation);
                if count > 1 {
                    for dj in [1, count - 1] {
                        let other = s.kube(KubeId {
                            index: (id.index + dj) % count,
                            ..id
                        });
                        assert!(!other.contains(z));
                    }
                }
            }
        }
    }

    #[test]
    fn tents_nest_or_disjoint() {
        let f = forest();
        let s = f.system(1);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..2000 {
            let k1 = rng.gen_range(0..=8u32);
            let k2 = rng.gen_range(0..=8u32);
            let id1 = KubeId {
                system: 1,
                generation: k1,
                index: rng.gen_range(0..s.kube_count(k1)),
            };
            let id2 = KubeId {
                system: 1,
                generation: k2,
                index: rng.gen_range(0..s.kube_count(k2)),
            };
            let (shallow, deep) = if k1 <= k2 { (id1, id2) } else { (id2, id1) };
            let nested = s.ancestor(deep, shallow.generation) == shallow;
            // sample points of the deep tent; they are in the shallow tent iff nested
            let kd = s.kube(deep);
            let ks = s.kube(shallow);
            for i in 0..8 {
                let th = kd.arc_start + kd.arc_width * (i as f64 + 0.5) / 8.0;
                let z = Complex64::from_polar(kd.inner_radius + 1e-9, th);
                if nested {
                    assert!(ks.tent_contains(z));
                } else {
                    assert!(!ks.tent_contains(z) || shallow == deep);
                }
            }
        }
    }

    #[test]
    fn approx_tent_examples() {
        let f = forest();
        let (id, ratio) = f.approx_tent(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(id.generation, 0);
        assert_abs_diff_eq!(ratio, 1.0);

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let rmax = f.system(0).radii[10];
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let z = Complex64::from_polar(rng.gen::<f64>() * rmax, rng.gen::<f64>() * TAU);
            let (_, ratio) = f.approx_tent(z).unwrap();
            worst = worst.max(ratio);
        }
        assert!(worst <= 64.0, "worst tent ratio {worst}");

        // apex exactly on a shift-0 grid cut: the shifted system covers it
        let z = Complex64::from_polar(
            0.9,
            f.system(0).kube(f.system(0).locate(Complex64::new(0.9, 0.0)).unwrap()).arc_start,
        );
        let (id, _) = f.approx_tent(z * Complex64::from_polar(1.0, 1e-12)).unwrap();
        let _ = id;
        // a window centered on the cut itself must come from system 1
        let s0 = f.system(0);
        let k = s0.generation_of_modulus(0.9).unwrap();
        let cut = s0.shift + s0.arc_width(k); // interior cut of generation k
        let apex = Complex64::from_polar(0.9, cut);
        let (id, ratio) = f.approx_tent(apex).unwrap();
        assert_eq!(id.system, 1, "cut-straddling window needs the shifted grid");
        assert!(ratio <= 64.0);
    }

    #[test]
    fn forest_json_roundtrip_fields() {
        let f = forest();
        let doc = f.to_json_document(3);
        assert_eq!(doc["systems"].as_array().unwrap().len(), 2);
        assert_eq!(
            doc["systems"][0]["generations"][2]["kube_count"].as_u64(),
            Some(4)
        );
        assert!(doc["caliber"].as_f64().unwrap() - 0.5 < 1e-12);
    }

    #[test]
    fn rejects_unsupported_dimension() {
        let params = DyadicParams {
            dimension: 2,
            ..Default::default()
        };
        assert!(matches!(
            build_forest(params, 2),
            Err(Error::UnsupportedDimension(2))
        ));
    }
}
