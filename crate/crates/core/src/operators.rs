//! Operator evaluations on the quadrature grid: Bergman projection,
//! Toeplitz operators and adjoints, Berezin transforms, sparse operators,
//! the maximal-operator family, and Orlicz/Luxemburg norms.
//!
//! Kernel-type integrals run over all grid cells (covered region plus
//! boundary tail), so full-disk integrals carry no truncation bias. Bulk
//! evaluation expands the kernel into angular moments
//! `Pg(z) = sum_m (m+1) <g, w^m> z^m`; the mode count is chosen from the
//! decay of the integrand's moment sequence and the evaluation radius, and
//! falls back to direct summation when the series is not trustworthy.

use crate::dyadic::{DyadicForest, KubeId};
use crate::error::{Error, Result};
use crate::geometry;
use crate::grid::{tent_integrals, GridFunction, NodeChains, QuadratureGrid, RingPrefix, TentTable};
use crate::symbols::Symbol;
use num_complex::Complex64;
use rayon::prelude::*;

/// Shared immutable context for tent-indexed operator evaluations.
pub struct TentCtx<'a> {
    pub grid: &'a QuadratureGrid,
    pub forest: &'a DyadicForest,
    /// Tent statistics truncate at this generation.
    pub cap: u32,
}

impl<'a> TentCtx<'a> {
    pub fn new(grid: &'a QuadratureGrid, forest: &'a DyadicForest) -> TentCtx<'a> {
        TentCtx {
            grid,
            forest,
            cap: grid
                .kube_generation_cap()
                .min(forest.params.max_generation),
        }
    }

    pub fn tent_measure(&self, id: KubeId) -> f64 {
        self.forest.system(id.system).tent_measure(id.generation)
    }

    /// Tent integrals of arbitrary per-node values (not premultiplied by
    /// cell weights).
    pub fn field_table(&self, values: &[f64]) -> TentTable {
        let weighted: Vec<f64> = values
            .iter()
            .zip(&self.grid.weight)
            .map(|(v, w)| v * w)
            .collect();
        let prefix = RingPrefix::build(self.grid, &weighted);
        tent_integrals(self.grid, &prefix, self.forest, self.cap)
    }

    pub fn abs_table(&self, f: &GridFunction) -> TentTable {
        let vals: Vec<f64> = f.values.iter().map(|v| v.norm()).collect();
        self.field_table(&vals)
    }

    pub fn abs_pow_table(&self, f: &GridFunction, e: f64) -> TentTable {
        let vals: Vec<f64> = f.values.iter().map(|v| v.norm().powf(e)).collect();
        self.field_table(&vals)
    }

    /// `||u||_{L^inf(tent)}` for every tent up to the cap: exact closed
    /// forms where the symbol provides them, otherwise sampled node maxima
    /// (a documented lower bound) plus any Lipschitz correction.
    pub fn symbol_sups(&self, u: &Symbol) -> TentTable {
        let mut per = Vec::new();
        if u.has_exact_tent_sup() {
            for s in &self.forest.systems {
                let tables: Vec<Vec<f64>> = (0..=self.cap)
                    .map(|k| {
                        (0..s.kube_count(k))
                            .map(|j| {
                                let kube = s.kube(KubeId {
                                    system: s.index,
                                    generation: k,
                                    index: j,
                                });
                                u.exact_tent_sup(&kube).unwrap()
                            })
                            .collect()
                    })
                    .collect();
                per.push(tables);
            }
            return TentTable { per, cap: self.cap };
        }
        // sampled: node maxima per kube, then bottom-up tent maxima
        let chains = NodeChains::build(self.grid, self.forest, self.cap);
        for (si, s) in self.forest.systems.iter().enumerate() {
            let mut kube_max: Vec<Vec<f64>> = (0..=self.cap)
                .map(|k| vec![0.0; s.kube_count(k) as usize])
                .collect();
            for (i, &z) in self.grid.z.iter().enumerate() {
                let v = u.eval(z).norm();
                let k = chains.depth[si][i];
                let j = chains.ancestor_index(si, i, k) as usize;
                let slot = &mut kube_max[k as usize][j];
                if v > *slot {
                    *slot = v;
                }
            }
            let mut tables = kube_max;
            for k in (0..self.cap).rev() {
                for j in 0..s.kube_count(k) as usize {
                    let mut mx = tables[k as usize][j];
                    for c in 0..s.branching as usize {
                        mx = mx.max(tables[k as usize + 1][j * s.branching as usize + c]);
                    }
                    tables[k as usize][j] = mx;
                }
            }
            if let Some(lip) = u.lipschitz() {
                // sampled sup plus L*h with h the cell scale of the kube band
                for (k, row) in tables.iter_mut().enumerate() {
                    let h = (self.forest.system(s.index).radii[k + 1]
                        - self.forest.system(s.index).radii[k])
                        / (2.0 * self.grid.spec.radial_subdivision as f64);
                    for v in row.iter_mut() {
                        *v += lip * h;
                    }
                }
            }
            per.push(tables);
        }
        TentTable { per, cap: self.cap }
    }

    /// Node indices sampled inside a tent (by node position).
    pub fn tent_node_indices(&self, id: KubeId) -> Vec<usize> {
        let kube = self.forest.kube(id);
        (0..self.grid.node_count())
            .filter(|&i| kube.tent_contains(self.grid.z[i]))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Projection and Toeplitz operators
// ---------------------------------------------------------------------------

/// Bergman projection at one point by direct quadrature:
/// `Pf(z) = sum_nodes K(z, w) f(w) weight(w)`.
pub fn project_at(grid: &QuadratureGrid, f: &[Complex64], z: Complex64) -> Complex64 {
    f.iter()
        .zip(&grid.z)
        .zip(&grid.weight)
        .map(|((fv, &w), &wt)| geometry::kernel(z, w) * fv * wt)
        .sum()
}

/// Toeplitz operator at one point: `T_u f(z) = P(uf)(z)`, or the adjoint
/// `conj(u(z)) Pf(z)`.
pub fn toeplitz_at(
    grid: &QuadratureGrid,
    u: &Symbol,
    f: &[Complex64],
    z: Complex64,
    adjoint: bool,
) -> Complex64 {
    if adjoint {
        u.eval(z).conj() * project_at(grid, f, z)
    } else {
        let uf: Vec<Complex64> = f
            .iter()
            .zip(&grid.z)
            .map(|(fv, &w)| u.eval(w) * fv)
            .collect();
        project_at(grid, &uf, z)
    }
}

/// Angular moment expansion of `Pg`: coefficients `c_m = <g, w^m>` so that
/// `Pg(z) = sum_m (m+1) c_m z^m`.
pub struct Moments {
    pub coeffs: Vec<Complex64>,
}

pub fn moments(grid: &QuadratureGrid, g: &[Complex64], n_modes: usize) -> Moments {
    // block-parallel with in-order reduction, deterministic
    const BLOCK: usize = 8192;
    let n = grid.node_count();
    let blocks: Vec<Vec<Complex64>> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(n);
            let mut acc = vec![Complex64::new(0.0, 0.0); n_modes];
            for i in lo..hi {
                let gw = g[i] * grid.weight[i];
                let zc = grid.z[i].conj();
                let mut p = Complex64::new(1.0, 0.0);
                for a in acc.iter_mut() {
                    *a += gw * p;
                    p *= zc;
                }
            }
            acc
        })
        .collect();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n_modes];
    for b in blocks {
        for (c, v) in coeffs.iter_mut().zip(b) {
            *c += v;
        }
    }
    Moments { coeffs }
}

impl Moments {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * z + (m as f64 + 1.0) * c;
        }
        acc
    }
}

/// How the bulk path evaluated, for accuracy bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub enum BulkPath {
    Series { modes: usize },
    Direct,
}

fn series_modes(decay: f64, radius: f64) -> Option<usize> {
    let q = decay * radius;
    if q >= 0.999 {
        return None;
    }
    let mut m = 8usize;
    while m < 4096 {
        let tail = (m as f64 + 2.0) * q.powi(m as i32) / (1.0 - q);
        if tail < 1e-12 {
            return Some(m);
        }
        m += 8;
    }
    None
}

/// Evaluate `T_u f = P(uf)` (or the adjoint) on many points. Uses the
/// moment series when the integrand's angular moments decay fast enough
/// for the farthest evaluation point, otherwise direct summation.
pub fn toeplitz_bulk(
    grid: &QuadratureGrid,
    u: &Symbol,
    f: &GridFunction,
    eval: &[Complex64],
    adjoint: bool,
) -> (Vec<Complex64>, BulkPath) {
    let g: Vec<Complex64> = if adjoint {
        f.values.clone()
    } else {
        f.values
            .iter()
            .zip(&grid.z)
            .map(|(fv, &w)| u.eval(w) * fv)
            .collect()
    };
    let rmax = eval.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let radial_u = adjoint || symbol_is_radial(u);
    let mode_cap = exact_mode_cap(u, f, adjoint);
    let path = if let Some(mm) = mode_cap {
        BulkPath::Series {
            modes: mm as usize + 2,
        }
    } else {
        let decay = match f.moment_decay() {
            Some(q) if radial_u => Some(q),
            // only O(1/m) decay from indicator-type data or non-radial
            // symbols: trust the series inside the safety radius
            _ if rmax <= grid.spec.safety_radius + 1e-12 => Some(1.0),
            _ => None,
        };
        match decay.and_then(|q| series_modes(q.min(0.9999), rmax.max(1e-9))) {
            Some(m) => BulkPath::Series { modes: m },
            None => BulkPath::Direct,
        }
    };
    let out = match &path {
        BulkPath::Series { modes } => {
            let mom = moments(grid, &g, *modes);
            let vals: Vec<Complex64> = eval.par_iter().map(|&z| mom.eval(z)).collect();
            if adjoint {
                vals.iter()
                    .zip(eval)
                    .map(|(v, &z)| u.eval(z).conj() * v)
                    .collect()
            } else {
                vals
            }
        }
        BulkPath::Direct => eval
            .par_iter()
            .map(|&z| {
                let p = project_at(grid, &g, z);
                if adjoint {
                    u.eval(z).conj() * p
                } else {
                    p
                }
            })
            .collect(),
    };
    (out, path)
}

fn symbol_is_radial(u: &Symbol) -> bool {
    use crate::symbols::SymbolForm::*;
    matches!(
        u.form,
        One | ModSquared | Vanishing { .. } | Power { .. } | AnnulusIndicator { .. }
    )
}

/// Top angular mode when the product `u*f` has a finite exact spectrum.
fn exact_mode_cap(u: &Symbol, f: &GridFunction, adjoint: bool) -> Option<u32> {
    use crate::grid::FnKind;
    let f_mode = match f.kind {
        FnKind::Constant(_) => Some(0),
        FnKind::Monomial(m) => Some(m),
        FnKind::ConjMonomial(_) => Some(0),
        FnKind::AnnulusIndicator { .. } => Some(0),
        _ => None,
    }?;
    if adjoint || symbol_is_radial(u) {
        Some(f_mode)
    } else if let crate::symbols::SymbolForm::Monomial { m } = u.form {
        Some(f_mode + m)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Berezin transform
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BerezinRoute {
    /// `integral of u |k_z|^2` by quadrature; needs `|z|` inside the safety
    /// radius (the kernel concentrates at the boundary).
    Kernel,
    /// `integral of u(phi_z(w))` with the disk automorphism; bounded
    /// integrand, valid up to `|z| <= 0.999`.
    Invariance,
}

pub fn berezin(grid: &QuadratureGrid, u: &Symbol, z: Complex64, route: BerezinRoute) -> Complex64 {
    match route {
        BerezinRoute::Kernel => {
            let norm = 1.0 - z.norm_sqr();
            grid.z
                .iter()
                .zip(&grid.weight)
                .map(|(&w, &wt)| {
                    let k2 =
                        norm * norm / (Complex64::new(1.0, 0.0) - z * w.conj()).norm_sqr().powi(2);
                    u.eval(w) * k2 * wt
                })
                .sum()
        }
        BerezinRoute::Invariance => grid
            .z
            .iter()
            .zip(&grid.weight)
            .map(|(&w, &wt)| u.eval(geometry::mobius(z, w)) * wt)
            .sum(),
    }
}

// ---------------------------------------------------------------------------
// Sparse and maximal operators
// ---------------------------------------------------------------------------

/// `S_u f(z) = sum over systems and tents containing z of
/// ||u||_{L^inf(tent)} <|f|>_tent`, truncated at the statistics cap.
pub fn sparse_apply(
    ctx: &TentCtx,
    usups: &TentTable,
    f_table: &TentTable,
    z: Complex64,
) -> Result<f64> {
    let mut acc = 0.0;
    for s in &ctx.forest.systems {
        let deep = s.generation_of_modulus(z.norm())?.min(ctx.cap);
        let id = s.kube_id_at(deep, z.arg());
        for k in 0..=deep {
            let anc = s.ancestor(id, k);
            let avg = f_table.get(anc) / ctx.tent_measure(anc);
            acc += usups.get(anc) * avg;
        }
    }
    Ok(acc)
}

/// `M f(z) = sup over tents containing z of <|f|>_tent` (all systems).
pub fn maximal_global(ctx: &TentCtx, f_table: &TentTable, z: Complex64) -> Result<f64> {
    chain_sup(ctx, z, |id| f_table.get(id) / ctx.tent_measure(id))
}

/// `M_u f(z) = sup ||u||_tent <|f|>_tent`.
pub fn maximal_symbol(
    ctx: &TentCtx,
    usups: &TentTable,
    f_table: &TentTable,
    z: Complex64,
) -> Result<f64> {
    chain_sup(ctx, z, |id| {
        usups.get(id) * f_table.get(id) / ctx.tent_measure(id)
    })
}

/// `M_sigma f(z) = sup (1/sigma(tent)) integral |f| sigma over tent`.
pub fn maximal_weighted(
    ctx: &TentCtx,
    fsigma_table: &TentTable,
    sigma_table: &TentTable,
    z: Complex64,
) -> Result<f64> {
    chain_sup(ctx, z, |id| fsigma_table.get(id) / sigma_table.get(id))
}

/// `M_{u,r} f(z) = sup ||u||_tent <|f|^r>_tent^{1/r}`; for the power Young
/// family this equals `M_{u,Phi}` exactly.
pub fn maximal_symbol_power(
    ctx: &TentCtx,
    usups: &TentTable,
    f_pow_table: &TentTable,
    r: f64,
    z: Complex64,
) -> Result<f64> {
    chain_sup(ctx, z, |id| {
        usups.get(id) * (f_pow_table.get(id) / ctx.tent_measure(id)).powf(1.0 / r)
    })
}

/// Localized `M_K f(z) = sup over tents of descendants of K containing z`.
/// Zero when `z` is outside the tent of `K`.
pub fn maximal_localized(
    ctx: &TentCtx,
    f_table: &TentTable,
    base: KubeId,
    z: Complex64,
) -> Result<f64> {
    let s = ctx.forest.system(base.system);
    let deep = s.generation_of_modulus(z.norm())?.min(ctx.cap);
    if deep < base.generation {
        return Ok(0.0);
    }
    let id = s.kube_id_at(deep, z.arg());
    if s.ancestor(id, base.generation) != base {
        return Ok(0.0);
    }
    let mut best: f64 = 0.0;
    for k in base.generation..=deep {
        let anc = s.ancestor(id, k);
        best = best.max(f_table.get(anc) / ctx.tent_measure(anc));
    }
    Ok(best)
}

fn chain_sup<F: Fn(KubeId) -> f64>(ctx: &TentCtx, z: Complex64, term: F) -> Result<f64> {
    let mut best: f64 = 0.0;
    for s in &ctx.forest.systems {
        let deep = s.generation_of_modulus(z.norm())?.min(ctx.cap);
        let id = s.kube_id_at(deep, z.arg());
        for k in 0..=deep {
            best = best.max(term(s.ancestor(id, k)));
        }
    }
    Ok(best)
}

/// Bulk variant of the chain walk over prebuilt node chains: applies `term`
/// along every node's ancestor chain in every system and returns per-node
/// suprema. Used for whole-grid evaluations of the maximal operators.
pub fn chain_sup_bulk<F: Fn(KubeId) -> f64 + Sync>(
    ctx: &TentCtx,
    chains: &NodeChains,
    term: F,
) -> Vec<f64> {
    (0..ctx.grid.node_count())
        .into_par_iter()
        .map(|i| {
            let mut best: f64 = 0.0;
            for (si, s) in ctx.forest.systems.iter().enumerate() {
                let deep = chains.depth[si][i];
                for k in 0..=deep {
                    best = best.max(term(KubeId {
                        system: s.index,
                        generation: k,
                        index: chains.ancestor_index(si, i, k),
                    }));
                }
            }
            best
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Young functions and Orlicz norms
// ---------------------------------------------------------------------------

/// Young functions; v1 carries the power family `Phi(t) = t^r`, whose
/// complement is `Psi(t) = kappa_r t^{r'}` with
/// `kappa_r = (1 - 1/r) r^{-1/(r-1)}`.
#[derive(Debug, Clone, Copy)]
pub enum YoungFunction {
    Power { r: f64 },
}

impl YoungFunction {
    pub fn power(r: f64) -> YoungFunction {
        assert!(r > 1.0);
        YoungFunction::Power { r }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            YoungFunction::Power { r } => t.powf(*r),
        }
    }

    pub fn conjugate_exponent(&self) -> f64 {
        match self {
            YoungFunction::Power { r } => r / (r - 1.0),
        }
    }

    pub fn complement_coeff(&self) -> f64 {
        match self {
            YoungFunction::Power { r } => (1.0 - 1.0 / r) * r.powf(-1.0 / (r - 1.0)),
        }
    }

    pub fn complement_value(&self, t: f64) -> f64 {
        self.complement_coeff() * t.powf(self.conjugate_exponent())
    }

    pub fn complement_inverse(&self, y: f64) -> f64 {
        (y / self.complement_coeff()).powf(1.0 / self.conjugate_exponent())
    }
}

/// Luxemburg norm of `f` over the tent of `id`: the least `lambda` with
/// tent-average of `Phi(|f|/lambda)` at most 1, found by bisection to
/// relative tolerance 1e-8. Zero for the zero function.
pub fn orlicz_norm(ctx: &TentCtx, f: &[Complex64], phi: &YoungFunction, id: KubeId) -> f64 {
    let nodes = ctx.tent_node_indices(id);
    let measure = ctx.tent_measure(id);
    let avg = |lambda: f64| -> f64 {
        nodes
            .iter()
            .map(|&i| phi.value(f[i].norm() / lambda) * ctx.grid.weight[i])
            .sum::<f64>()
            / measure
    };
    let top = nodes.iter().map(|&i| f[i].norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    let mut hi = top;
    while avg(hi) > 1.0 {
        hi *= 2.0;
    }
    let mut lo = hi;
    while avg(lo) < 1.0 {
        lo /= 2.0;
        if lo < 1e-300 {
            return 0.0;
        }
    }
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if avg(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo) <= 1e-8 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// The Young-condition constant
// ---------------------------------------------------------------------------

/// `c_Phi = 1 + sum_{k>=1} rho^{C^k / r'}` for the power family, summed to
/// absolute tail below 1e-12 (the exponents grow geometrically), together
/// with its ratio to `1 + log r'`.
#[derive(Debug, Clone, Copy)]
pub struct CPhi {
    pub c_phi: f64,
    pub ratio_to_log: f64,
}

pub fn cphi(r: f64, rho: f64, c: f64) -> Result<CPhi> {
    if !(rho > 0.0 && rho < 1.0) || c <= 1.0 || c * rho >= 1.0 {
        return Err(Error::StoppingParameter(c * rho));
    }
    assert!(r > 1.0);
    let rp = r / (r - 1.0);
    let mut sum = 1.0;
    let mut k = 1u32;
    loop {
        let term = rho.powf(c.powi(k as i32) / rp);
        sum += term;
        if term < 1e-12 {
            break;
        }
        k += 1;
        if k > 1_000_000 {
            break;
        }
    }
    Ok(CPhi {
        c_phi: sum,
        ratio_to_log: sum / (1.0 + rp.ln()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{build_forest, DyadicParams};
    use crate::grid::{build_grid, FnKind, GridSpec};
    use approx::assert_abs_diff_eq;

    fn test_grid() -> QuadratureGrid {
        build_grid(
            GridSpec {
                grid_generation: 8,
                angular_density: 12,
                radial_subdivision: 3,
                safety_radius: 0.9,
                tail_bands: 26,
            },
            0.5 * 2.0f64.ln(),
        )
        .unwrap()
    }

    #[test]
    fn projection_reproduces_monomials() {
        let grid = test_grid();
        for m in [0u32, 1, 3, 6] {
            let f = GridFunction::sample(&grid, FnKind::Monomial(m));
            for z in [
                Complex64::from_polar(0.8, 0.3),
                Complex64::from_polar(0.5, 2.0),
            ] {
                let p = project_at(&grid, &f.values, z);
                let expect = z.powu(m);
                let denom = expect.norm().max(1e-12);
                assert!(
                    (p - expect).norm() / denom < 1e-3,
                    "m={m} z={z} err={}",
                    (p - expect).norm() / denom
                );
            }
        }
    }

    #[test]
    fn projection_kills_antiholomorphic() {
        let grid = test_grid();
        let f = GridFunction::sample(&grid, FnKind::ConjMonomial(1));
        let p = project_at(&grid, &f.values, Complex64::from_polar(0.8, 1.1));
        assert!(p.norm() < 1e-3);
    }

    #[test]
    fn toeplitz_mod_squared_of_one() {
        let grid = test_grid();
        let one = GridFunction::sample(&grid, FnKind::Constant(Complex64::new(1.0, 0.0)));
        let v = toeplitz_at(
            &grid,
            &Symbol::mod_squared(),
            &one.values,
            Complex64::from_polar(0.7, 0.9),
            false,
        );
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-3);
    }

    #[test]
    fn adjoint_pairing_identity() {
        let grid = test_grid();
        let u = Symbol::mod_squared();
        let f = GridFunction::sample(&grid, FnKind::Monomial(2));
        let g = GridFunction::sample(&grid, FnKind::Monomial(1));
        let eval: Vec<Complex64> = grid.z.clone();
        let (tuf, _) = toeplitz_bulk(&grid, &u, &f, &eval, false);
        let (tusg, _) = toeplitz_bulk(&grid, &u, &g, &eval, true);
        let lhs = grid.inner_product(&tuf, &g.values);
        let rhs = grid.inner_product(&f.values, &tusg);
        assert!((lhs - rhs).norm() < 1e-3, "lhs={lhs} rhs={rhs}");
    }

    #[test]
    fn bulk_series_matches_direct() {
        let grid = test_grid();
        let w0 = Complex64::from_polar(0.7, 1.3);
        let f = GridFunction::sample(&grid, FnKind::NormKernel { w: w0, p: 2.0 });
        let u = Symbol::vanishing(1.0);
        let pts = vec![
            Complex64::from_polar(0.85, 0.2),
            Complex64::from_polar(0.4, 4.0),
        ];
        let (series, path) = toeplitz_bulk(&grid, &u, &f, &pts, false);
        assert!(matches!(path, BulkPath::Series { .. }));
        for (sv, &z) in series.iter().zip(&pts) {
            let dv = toeplitz_at(&grid, &u, &f.values, z, false);
            assert!((sv - dv).norm() < 1e-9, "z={z}");
        }
        // halfplane symbol inside the safety radius also goes through series
        let (hs, path) = toeplitz_bulk(&grid, &Symbol::half_plane(), &f, &pts, false);
        assert!(matches!(path, BulkPath::Series { .. }));
        for (sv, &z) in hs.iter().zip(&pts) {
            let dv = toeplitz_at(&grid, &Symbol::half_plane(), &f.values, z, false);
            assert!((sv - dv).norm() < 1e-6, "z={z}");
        }
    }

    #[test]
    fn berezin_routes_agree_and_match_series_oracle() {
        let grid = test_grid();
        let u = Symbol::mod_squared();
        // closed form: 1 - (1-x)[x + (1-x)ln(1-x)]/x^2 at x = |z|^2
        let closed = |x: f64| 1.0 - (1.0 - x) * (x + (1.0 - x) * (1.0 - x).ln()) / (x * x);
        for z in [
            Complex64::from_polar(0.5f64.sqrt(), 0.7),
            Complex64::from_polar(0.6, 3.0),
        ] {
            let x = z.norm_sqr();
            let vk = berezin(&grid, &u, z, BerezinRoute::Kernel);
            let vi = berezin(&grid, &u, z, BerezinRoute::Invariance);
            assert!((vk - vi).norm() < 5e-3);
            assert_abs_diff_eq!(vk.re, closed(x), epsilon = 1e-3);
            assert_abs_diff_eq!(vi.re, closed(x), epsilon = 1e-3);
        }
        // constant symbol: both routes give 1 everywhere
        for z in [Complex64::new(0.0, 0.0), Complex64::from_polar(0.8, 1.0)] {
            let v = berezin(&grid, &Symbol::one(), z, BerezinRoute::Invariance);
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-6);
        }
        let v0 = berezin(&grid, &u, Complex64::new(0.0, 0.0), BerezinRoute::Kernel);
        assert_abs_diff_eq!(v0.re, 0.5, epsilon = 1e-6);
    }

    #[test]
    fn sparse_count_identity_for_ones() {
        let grid = test_grid();
        let forest = build_forest(
            DyadicParams {
                max_generation: 7,
                ..Default::default()
            },
            2,
        )
        .unwrap();
        let ctx = TentCtx::new(&grid, &forest);
        let one = GridFunction::sample(&grid, FnKind::Constant(Complex64::new(1.0, 0.0)));
        let ftab = ctx.abs_table(&one);
        let usups = ctx.symbol_sups(&Symbol::one());
        for (r, expect_k) in [(0.2, 0u32), (0.5, 1), (0.7, 2)] {
            let z = Complex64::from_polar(r, 1.0);
            let v = sparse_apply(&ctx, &usups, &ftab, z).unwrap();
            // averages of 1 are 1 up to the residual past the tail bands
            let expect = 2.0 * (expect_k + 1) as f64;
            assert_abs_diff_eq!(v, expect, epsilon = 1e-6);
        }
        // root term lower bound
        let z = Complex64::from_polar(0.65, 2.0);
        let v = sparse_apply(&ctx, &usups, &ftab, z).unwrap();
        assert!(v >= 1.0 - 1e-9);
    }

    #[test]
    fn sparse_indicator_closed_form() {
        let grid = test_grid();
        let forest = build_forest(
            DyadicParams {
                max_generation: 7,
                ..Default::default()
            },
            1,
        )
        .unwrap();
        let ctx = TentCtx::new(&grid, &forest);
        // indicator of one generation-2 kube; for z inside it, the
        // generation-k ancestor tents each hold the full kube mass, so the
        // k-th term is |K_2| / |tent_k| = |K_2| (m^k+1)^2 / 4
        let s = forest.system(0);
        let z = Complex64::from_polar(0.65, 1.0); // generation 2
        let id = s.locate(z).unwrap();
        assert_eq!(id.generation, 2);
        let f = GridFunction::sample_kube(&grid, &forest, id);
        let ftab = ctx.abs_table(&f);
        let usups = ctx.symbol_sups(&Symbol::one());
        let v = sparse_apply(&ctx, &usups, &ftab, z).unwrap();
        let kube_mass = s.kube_measure(2);
        let expect: f64 = (0..=2)
            .map(|k| {
                let mk = 2.0f64.powi(k) + 1.0;
                kube_mass * mk * mk / 4.0
            })
            .sum();
        assert_abs_diff_eq!(v, expect, epsilon = 1e-4);
    }

    #[test]
    fn maximal_family_basics() {
        let grid = test_grid();
        let forest = build_forest(
            DyadicParams {
                max_generation: 7,
                ..Default::default()
            },
            2,
        )
        .unwrap();
        let ctx = TentCtx::new(&grid, &forest);
        let one = GridFunction::sample(&grid, FnKind::Constant(Complex64::new(1.0, 0.0)));
        let ftab = ctx.abs_table(&one);
        let z = Complex64::from_polar(0.55, 0.4);
        assert_abs_diff_eq!(maximal_global(&ctx, &ftab, z).unwrap(), 1.0, epsilon = 1e-6);
        // M_sigma of 1 is 1 for any weight
        let sig: Vec<f64> = grid.z.iter().map(|z| 1.0 + z.re * z.re).collect();
        let sigtab = ctx.field_table(&sig);
        assert_abs_diff_eq!(
            maximal_weighted(&ctx, &sigtab, &sigtab, z).unwrap(),
            1.0,
            epsilon = 1e-9
        );
        // Jensen: M_{u,r} f >= M_u f
        let f = GridFunction::sample(&grid, FnKind::Monomial(1));
        let fa = ctx.abs_table(&f);
        let f2 = ctx.abs_pow_table(&f, 2.0);
        let usups = ctx.symbol_sups(&Symbol::one());
        let m1 = maximal_symbol(&ctx, &usups, &fa, z).unwrap();
        let m2 = maximal_symbol_power(&ctx, &usups, &f2, 2.0, z).unwrap();
        assert!(m2 >= m1 - 1e-12);
        // localized at the root is dominated by the global sup
        let root = KubeId {
            system: 0,
            generation: 0,
            index: 0,
        };
        let ml = maximal_localized(&ctx, &fa, root, z).unwrap();
        assert!(ml <= maximal_global(&ctx, &fa, z).unwrap() + 1e-12);
        // outside the base tent the localized operator vanishes
        let deep = KubeId {
            system: 0,
            generation: 3,
            index: 5,
        };
        let far = Complex64::from_polar(0.1, 0.0);
        assert_eq!(maximal_localized(&ctx, &fa, deep, far).unwrap(), 0.0);
    }

    #[test]
    fn young_complement_identities() {
        for r in [1.5, 2.0, 3.0] {
            let phi = YoungFunction::power(r);
            for t in [0.2, 1.0, 7.3] {
                let y = phi.complement_value(t);
                assert_abs_diff_eq!(phi.complement_inverse(y), t, epsilon = 1e-10);
            }
            // convexity on sample triples
            for (a, b) in [(0.1, 2.0), (1.0, 4.0)] {
                let mid = 0.5 * (a + b);
                assert!(phi.value(mid) <= 0.5 * (phi.value(a) + phi.value(b)) + 1e-12);
            }
            assert_abs_diff_eq!(phi.value(0.0), 0.0);
        }
    }

    #[test]
    fn luxemburg_norm_power_family() {
        let grid = test_grid();
        let forest = build_forest(
            DyadicParams {
                max_generation: 7,
                ..Default::default()
            },
            2,
        )
        .unwrap();
        let ctx = TentCtx::new(&grid, &forest);
        let id = KubeId {
            system: 0,
            generation: 1,
            index: 1,
        };
        let phi = YoungFunction::power(2.0);
        let nodes = ctx.tent_node_indices(id);
        // constants: ||c||_Phi = c * sqrt(grid fraction) for Phi = t^2
        let c = GridFunction::sample(&grid, FnKind::Constant(Complex64::new(2.5, 0.0)));
        let n = orlicz_norm(&ctx, &c.values, &phi, id);
        let frac: f64 =
            nodes.iter().map(|&i| ctx.grid.weight[i]).sum::<f64>() / ctx.tent_measure(id);
        assert_abs_diff_eq!(n, 2.5 * frac.sqrt(), epsilon = 1e-6);
        // Phi = t^2: Luxemburg equals the quadratic tent average
        let f = GridFunction::sample(&grid, FnKind::Monomial(1));
        let n2 = orlicz_norm(&ctx, &f.values, &phi, id);
        let q: f64 = nodes
            .iter()
            .map(|&i| f.values[i].norm_sqr() * ctx.grid.weight[i])
            .sum::<f64>()
            / ctx.tent_measure(id);
        assert_abs_diff_eq!(n2, q.sqrt(), epsilon = 1e-7);
        // zero function
        let zf = GridFunction::sample(&grid, FnKind::Constant(Complex64::new(0.0, 0.0)));
        assert_eq!(orlicz_norm(&ctx, &zf.values, &phi, id), 0.0);
    }

    #[test]
    fn cphi_values_and_monotonicity() {
        let rho = 8.0 / 9.0;
        // r' -> 1+: exponents C^k stay bounded away from 0, sum converges
        let tight = cphi(1.0e6, rho, 1.05).unwrap(); // r' ~ 1
        assert!(tight.c_phi.is_finite());
        let mut prev = 0.0;
        for rp in [2.0, 10.0, 100.0, 1000.0] {
            let r = rp / (rp - 1.0);
            let v = cphi(r, rho, 1.05).unwrap();
            assert!(v.c_phi > prev, "c_phi increasing in r'");
            prev = v.c_phi;
        }
        // frozen reference from direct summation
        let v = cphi(2.0, rho, 1.05).unwrap();
        assert_abs_diff_eq!(v.c_phi, 47.933422, epsilon = 1e-4);
        // increasing in rho
        let lo = cphi(2.0, 0.5, 1.05).unwrap();
        assert!(lo.c_phi < v.c_phi);
        // parameter guard
        assert!(cphi(2.0, 0.97, 1.05).is_err());
    }
}
