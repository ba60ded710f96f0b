//! Weights and their characteristics.
//!
//! Radial power weights `sigma_b(z) = scale * (1-|z|^2)^{-b}` admit closed
//! forms for every tent average, so all of their characteristics evaluate
//! exactly and independently of any grid. Tabulated and grid-sampled
//! weights go through the quadrature machinery. Every supremum is taken
//! over kubes of generation at most the truncation depth and reports the
//! maximizing kube; truncated values are monotone lower bounds of the true
//! suprema.

use crate::dyadic::{DyadicForest, KubeId};
use crate::error::{Error, Result};
use crate::grid::{NodeChains, QuadratureGrid, RingPrefix};
use crate::operators::TentCtx;
use crate::symbols::Symbol;
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Weight representations
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub enum WeightForm {
    /// `scale * (1-|z|^2)^{-b}`; products of powers fold into one term.
    Power { scale: f64, b: f64 },
    /// Tabulated weight with nearest-node lookup in polar coordinates.
    Table(Arc<TableWeight>),
    /// Values sampled on a fixed grid's nodes (positive).
    GridSampled { name: String, values: Arc<Vec<f64>> },
}

#[derive(Clone)]
pub struct Weight {
    pub form: WeightForm,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.name())
    }
}

impl Weight {
    pub fn one() -> Weight {
        Weight::power(0.0)
    }

    pub fn power(b: f64) -> Weight {
        Weight {
            form: WeightForm::Power { scale: 1.0, b },
        }
    }

    pub fn scaled_power(scale: f64, b: f64) -> Weight {
        assert!(scale > 0.0);
        Weight {
            form: WeightForm::Power { scale, b },
        }
    }

    pub fn table(t: TableWeight) -> Weight {
        Weight {
            form: WeightForm::Table(Arc::new(t)),
        }
    }

    pub fn grid_sampled(name: &str, values: Vec<f64>) -> Weight {
        assert!(values.iter().all(|v| *v > 0.0), "weights must be positive");
        Weight {
            form: WeightForm::GridSampled {
                name: name.to_string(),
                values: Arc::new(values),
            },
        }
    }

    pub fn name(&self) -> String {
        match &self.form {
            WeightForm::Power { scale, b } => {
                if *scale == 1.0 {
                    format!("power:b={b}")
                } else {
                    format!("power:b={b},scale={scale}")
                }
            }
            WeightForm::Table(t) => format!("table:{}", t.source),
            WeightForm::GridSampled { name, .. } => format!("grid:{name}"),
        }
    }

    pub fn power_params(&self) -> Option<(f64, f64)> {
        match &self.form {
            WeightForm::Power { scale, b } => Some((*scale, *b)),
            _ => None,
        }
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        match &self.form {
            WeightForm::Power { scale, b } => scale * (1.0 - z.norm_sqr()).powf(-b),
            WeightForm::Table(t) => t.lookup(z),
            WeightForm::GridSampled { .. } => {
                panic!("grid-sampled weights evaluate via node values")
            }
        }
    }

    /// Node values on a grid.
    pub fn values_on(&self, grid: &QuadratureGrid) -> Vec<f64> {
        match &self.form {
            WeightForm::GridSampled { values, .. } => {
                assert_eq!(values.len(), grid.node_count(), "grid mismatch");
                values.as_ref().clone()
            }
            _ => grid.z.iter().map(|&z| self.eval(z)).collect(),
        }
    }

    /// Pointwise power `sigma^e` within the family.
    pub fn pow(&self, e: f64) -> Weight {
        match &self.form {
            WeightForm::Power { scale, b } => Weight {
                form: WeightForm::Power {
                    scale: scale.powf(e),
                    b: b * e,
                },
            },
            WeightForm::Table(t) => Weight::table(t.pow(e)),
            WeightForm::GridSampled { name, values } => Weight {
                form: WeightForm::GridSampled {
                    name: format!("{name}^{e}"),
                    values: Arc::new(values.iter().map(|v| v.powf(e)).collect()),
                },
            },
        }
    }

    /// The dual weight `sigma' = sigma^{1-p'}`.
    pub fn dual(&self, p: f64) -> Weight {
        let pp = p / (p - 1.0);
        self.pow(1.0 - pp)
    }

    /// Parse the weight mini-language:
    /// `one | power:b=<x>[,scale=<x>] | product:[<spec>;<spec>;...] |
    /// table:<path>`.
    pub fn parse(spec: &str) -> Result<Weight> {
        let s = spec.trim();
        let bad = |m: &str| Error::WeightSpec(format!("{m}: `{s}`"));
        if s == "one" {
            return Ok(Weight::one());
        }
        if let Some(rest) = s.strip_prefix("power:") {
            let mut b = None;
            let mut scale = 1.0;
            for part in rest.split(',') {
                if let Some(v) = part.strip_prefix("b=") {
                    b = Some(v.parse::<f64>().map_err(|_| bad("bad b"))?);
                } else if let Some(v) = part.strip_prefix("scale=") {
                    scale = v.parse::<f64>().map_err(|_| bad("bad scale"))?;
                } else {
                    return Err(bad("unknown power field"));
                }
            }
            let b = b.ok_or_else(|| bad("missing b"))?;
            return Ok(Weight::scaled_power(scale, b));
        }
        if let Some(rest) = s.strip_prefix("product:[") {
            let inner = rest.strip_suffix(']').ok_or_else(|| bad("missing ]"))?;
            let mut scale = 1.0;
            let mut b = 0.0;
            for part in inner.split(';').filter(|p| !p.trim().is_empty()) {
                let w = Weight::parse(part)?;
                match w.power_params() {
                    Some((sc, bb)) => {
                        scale *= sc;
                        b += bb;
                    }
                    None => return Err(bad("product supports power factors only")),
                }
            }
            return Ok(Weight::scaled_power(scale, b));
        }
        if let Some(path) = s.strip_prefix("table:") {
            return Ok(Weight::table(TableWeight::from_csv_path(path)?));
        }
        Err(bad("unknown weight form"))
    }
}

/// Polar lookup table `(r, theta) -> value` with nearest-node semantics.
pub struct TableWeight {
    pub source: String,
    radii: Vec<f64>,
    /// per radius: sorted `(theta, value)` rows
    rows: Vec<Vec<(f64, f64)>>,
}

impl TableWeight {
    pub fn from_rows(source: &str, mut entries: Vec<(f64, f64, f64)>) -> Result<TableWeight> {
        if entries.is_empty() {
            return Err(Error::WeightSpec("empty weight table".into()));
        }
        for (_, _, v) in &entries {
            if !(*v > 0.0) {
                return Err(Error::WeightSpec("table weight values must be positive".into()));
            }
        }
        entries.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut radii = Vec::new();
        let mut rows: Vec<Vec<(f64, f64)>> = Vec::new();
        for (r, th, v) in entries {
            if radii.last().map_or(true, |&last: &f64| r > last) {
                radii.push(r);
                rows.push(Vec::new());
            }
            rows.last_mut().unwrap().push((th.rem_euclid(TAU), v));
        }
        for row in &mut rows {
            row.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        Ok(TableWeight {
            source: source.to_string(),
            radii,
            rows,
        })
    }

    pub fn from_csv_path(path: &str) -> Result<TableWeight> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| Error::WeightSpec(format!("csv: {e}")))?;
        let mut entries = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::WeightSpec(format!("csv: {e}")))?;
            if rec.len() < 3 {
                continue;
            }
            let parse = |i: usize| -> Result<f64> {
                rec[i]
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::WeightSpec(format!("bad number `{}`", &rec[i])))
            };
            // skip a header row
            if rec[0].trim().parse::<f64>().is_err() {
                continue;
            }
            entries.push((parse(0)?, parse(1)?, parse(2)?));
        }
        TableWeight::from_rows(path, entries)
    }

    pub fn lookup(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let th = z.arg().rem_euclid(TAU);
        // nearest radius
        let i = match self
            .radii
            .binary_search_by(|probe| probe.partial_cmp(&r).unwrap())
        {
            Ok(i) => i,
            Err(i) => {
                if i == 0 {
                    0
                } else if i >= self.radii.len() {
                    self.radii.len() - 1
                } else if (self.radii[i] - r).abs() < (r - self.radii[i - 1]).abs() {
                    i
                } else {
                    i - 1
                }
            }
        };
        let row = &self.rows[i];
        // nearest angle on the circle
        let mut best = (f64::MAX, row[0].1);
        for &(a, v) in row {
            let d = (a - th).rem_euclid(TAU).min((th - a).rem_euclid(TAU));
            if d < best.0 {
                best = (d, v);
            }
        }
        best.1
    }

    pub fn pow(&self, e: f64) -> TableWeight {
        TableWeight {
            source: format!("{}^{}", self.source, e),
            radii: self.radii.clone(),
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|&(a, v)| (a, v.powf(e))).collect())
                .collect(),
        }
    }
}

// ---------------------------------------------------------------------------
// Tent averages
// ---------------------------------------------------------------------------

/// Radial mass `integral_r^1 sigma^e(s) 2s ds` for the power family.
fn power_radial_mass(scale: f64, b: f64, e: f64, r: f64) -> Result<f64> {
    let eb = e * b;
    if eb >= 1.0 {
        return Err(Error::DivergentAverage { eb });
    }
    Ok(scale.powf(e) * (1.0 - r * r).powf(1.0 - eb) / (1.0 - eb))
}

/// `<sigma^e>` over the tent of `id`. Closed form for power weights,
/// quadrature otherwise.
pub fn tent_average(
    sigma: &Weight,
    forest: &DyadicForest,
    id: KubeId,
    e: f64,
    ctx: Option<&TentCtx>,
) -> Result<f64> {
    let s = forest.system(id.system);
    let rk = s.radii[id.generation as usize];
    if let Some((scale, b)) = sigma.power_params() {
        return Ok(power_radial_mass(scale, b, e, rk)? / (1.0 - rk * rk));
    }
    let ctx = ctx.ok_or_else(|| {
        Error::Config("tent_average for non-radial weights needs a quadrature context".into())
    })?;
    let vals: Vec<f64> = sigma
        .values_on(ctx.grid)
        .iter()
        .zip(&ctx.grid.weight)
        .map(|(v, w)| v.powf(e) * w)
        .collect();
    let prefix = RingPrefix::build(ctx.grid, &vals);
    let kube = forest.kube(id);
    let mass = prefix.sector_annulus(ctx.grid, kube.inner_radius, kube.arc_start, kube.arc_width);
    Ok(mass / kube.tent_measure)
}

// ---------------------------------------------------------------------------
// Characteristics
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub enum CharacteristicKind {
    /// `sup <sigma> <sigma^{1-p'}>^{p-1}` over tents.
    BpDyadic(f64),
    /// `sup <sigma> ||sigma^{-1}||_inf` over tents.
    B1Dyadic,
    /// `sup ||u||_inf(tent) <sigma> <sigma^{1-p'}>^{p-1}`.
    UBp(Symbol, f64),
    /// `sup ||u||_inf(tent) <sigma> ||sigma^{-1}||_inf`.
    UB1(Symbol),
    /// `sup <sigma^r>^{1/r} / <sigma>`.
    ReverseHolder(f64),
    /// `sup (1/sigma(tent)) integral_tent M(sigma chi_tent)`.
    BInfinity,
    /// `c_sigma`: sup over kubes of (sup_K sigma)/(inf_K sigma).
    Regularity,
}

impl CharacteristicKind {
    pub fn name(&self) -> String {
        match self {
            CharacteristicKind::BpDyadic(p) => format!("bp(p={p})"),
            CharacteristicKind::B1Dyadic => "b1".into(),
            CharacteristicKind::UBp(u, p) => format!("ubp(u={},p={p})", u.name()),
            CharacteristicKind::UB1(u) => format!("ub1(u={})", u.name()),
            CharacteristicKind::ReverseHolder(r) => format!("rh(r={r})"),
            CharacteristicKind::BInfinity => "binf".into(),
            CharacteristicKind::Regularity => "regularity".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Characteristic {
    pub value: f64,
    pub witness: KubeId,
}

/// Characteristic of a weight over kubes of generation <= `max_generation`
/// across all systems. Power weights use closed forms; other weights need
/// the quadrature context and truncate at its statistics cap.
pub fn characteristic(
    kind: &CharacteristicKind,
    sigma: &Weight,
    forest: &DyadicForest,
    max_generation: u32,
    ctx: Option<&TentCtx>,
) -> Result<Characteristic> {
    if sigma.power_params().is_some() {
        characteristic_power(kind, sigma, forest, max_generation, ctx)
    } else {
        characteristic_grid(kind, sigma, forest, max_generation, ctx)
    }
}

fn sup_over_kubes<F: Fn(KubeId) -> Result<f64>>(
    forest: &DyadicForest,
    max_generation: u32,
    term: F,
) -> Result<Characteristic> {
    let mut best = f64::MIN;
    let mut witness = KubeId {
        system: 0,
        generation: 0,
        index: 0,
    };
    for id in forest.kube_ids(max_generation) {
        let v = term(id)?;
        if v > best {
            best = v;
            witness = id;
        }
    }
    Ok(Characteristic {
        value: best,
        witness,
    })
}

fn characteristic_power(
    kind: &CharacteristicKind,
    sigma: &Weight,
    forest: &DyadicForest,
    max_generation: u32,
    ctx: Option<&TentCtx>,
) -> Result<Characteristic> {
    let (scale, b) = sigma.power_params().unwrap();
    let g = max_generation.min(forest.params.max_generation);
    let s = forest.system(0);
    let avg = |e: f64, k: u32| -> Result<f64> {
        let rk = s.radii[k as usize];
        Ok(power_radial_mass(scale, b, e, rk)? / (1.0 - rk * rk))
    };
    // the generation-only value of the defining product, without a symbol
    let base = |k: u32| -> Result<f64> {
        match kind {
            CharacteristicKind::BpDyadic(p) | CharacteristicKind::UBp(_, p) => {
                let pp = p / (p - 1.0);
                Ok(avg(1.0, k)? * avg(1.0 - pp, k)?.powf(p - 1.0))
            }
            CharacteristicKind::B1Dyadic | CharacteristicKind::UB1(_) => {
                if b < 0.0 {
                    return Err(Error::DivergentAverage { eb: -b });
                }
                let rk = s.radii[k as usize];
                // sigma increasing: sigma^{-1} peaks at the tent's inner radius
                let inv_sup = (1.0 - rk * rk).powf(b) / scale;
                Ok(avg(1.0, k)? * inv_sup)
            }
            CharacteristicKind::ReverseHolder(r) => {
                Ok(avg(*r, k)?.powf(1.0 / r) / avg(1.0, k)?)
            }
            CharacteristicKind::BInfinity => Ok(binfinity_power_value(scale, b, k, g, s)?),
            CharacteristicKind::Regularity => {
                let ratio = if k == 0 {
                    1.0 / (1.0 - s.radii[1] * s.radii[1])
                } else {
                    (1.0 - s.radii[k as usize] * s.radii[k as usize])
                        / (1.0 - s.radii[k as usize + 1] * s.radii[k as usize + 1])
                };
                Ok(ratio.powf(b.abs()))
            }
        }
    };
    match kind {
        CharacteristicKind::UBp(u, _) | CharacteristicKind::UB1(u) => {
            // symbol sup varies per kube; weight part per generation
            let per_gen: Vec<f64> = (0..=g).map(base).collect::<Result<_>>()?;
            if u.has_exact_tent_sup() {
                sup_over_kubes(forest, g, |id| {
                    let kube = forest.kube(id);
                    Ok(u.exact_tent_sup(&kube).unwrap() * per_gen[id.generation as usize])
                })
            } else {
                let ctx = ctx.ok_or_else(|| {
                    Error::Config("sampled symbol sups need a quadrature context".into())
                })?;
                let sups = ctx.symbol_sups(u);
                sup_over_kubes(forest, g.min(sups.cap), |id| {
                    Ok(sups.get(id) * per_gen[id.generation as usize])
                })
            }
        }
        _ => {
            // generation-only: witness at the maximizing generation
            let mut best = f64::MIN;
            let mut wk = 0u32;
            for k in 0..=g {
                let v = base(k)?;
                if v > best {
                    best = v;
                    wk = k;
                }
            }
            Ok(Characteristic {
                value: best,
                witness: KubeId {
                    system: 0,
                    generation: wk,
                    index: 0,
                },
            })
        }
    }
}

/// `B_infinity` value of a radial power weight at outer generation `k`:
/// the truncated maximal function of `sigma chi_tent` is constant on each
/// generation band (the running maximum of the chain averages), so the
/// integral is an exact finite sum over bands, with the region past the
/// truncation carrying the capped value.
fn binfinity_power_value(
    scale: f64,
    b: f64,
    k: u32,
    g: u32,
    s: &crate::dyadic::DyadicSystem,
) -> Result<f64> {
    let avg_at = |gen: u32| -> Result<f64> {
        let r = s.radii[gen as usize];
        Ok(power_radial_mass(scale, b, 1.0, r)? / (1.0 - r * r))
    };
    let mut running = f64::MIN;
    let mut num = 0.0;
    for gen in k..g {
        running = running.max(avg_at(gen)?);
        let band =
            s.radii[gen as usize + 1].powi(2) - s.radii[gen as usize].powi(2);
        num += running * band;
    }
    running = running.max(avg_at(g)?);
    let rg = s.radii[g as usize];
    num += running * (1.0 - rg * rg);
    let sigma_mass = power_radial_mass(scale, b, 1.0, s.radii[k as usize])?;
    Ok(num / sigma_mass)
}

fn characteristic_grid(
    kind: &CharacteristicKind,
    sigma: &Weight,
    forest: &DyadicForest,
    max_generation: u32,
    ctx: Option<&TentCtx>,
) -> Result<Characteristic> {
    let ctx = ctx.ok_or_else(|| {
        Error::Config(format!(
            "characteristic {} of a non-radial weight needs a quadrature context",
            kind.name()
        ))
    })?;
    let g = max_generation.min(ctx.cap);
    let values = sigma.values_on(ctx.grid);
    let tents = |e: f64| {
        let v: Vec<f64> = values.iter().map(|x| x.powf(e)).collect();
        ctx.field_table(&v)
    };
    match kind {
        CharacteristicKind::BpDyadic(p) => {
            let pp = p / (p - 1.0);
            let t1 = tents(1.0);
            let t2 = tents(1.0 - pp);
            sup_over_kubes(forest, g, |id| {
                let m = ctx.tent_measure(id);
                Ok((t1.get(id) / m) * (t2.get(id) / m).powf(p - 1.0))
            })
        }
        CharacteristicKind::B1Dyadic => {
            let t1 = tents(1.0);
            let mins = tent_node_min(ctx, &values);
            sup_over_kubes(forest, g, |id| {
                Ok((t1.get(id) / ctx.tent_measure(id)) / mins.get(id))
            })
        }
        CharacteristicKind::UBp(u, p) => {
            let pp = p / (p - 1.0);
            let t1 = tents(1.0);
            let t2 = tents(1.0 - pp);
            let sups = ctx.symbol_sups(u);
            sup_over_kubes(forest, g, |id| {
                let m = ctx.tent_measure(id);
                Ok(sups.get(id) * (t1.get(id) / m) * (t2.get(id) / m).powf(p - 1.0))
            })
        }
        CharacteristicKind::UB1(u) => {
            let t1 = tents(1.0);
            let mins = tent_node_min(ctx, &values);
            let sups = ctx.symbol_sups(u);
            sup_over_kubes(forest, g, |id| {
                Ok(sups.get(id) * (t1.get(id) / ctx.tent_measure(id)) / mins.get(id))
            })
        }
        CharacteristicKind::ReverseHolder(r) => {
            let t1 = tents(1.0);
            let tr = tents(*r);
            sup_over_kubes(forest, g, |id| {
                let m = ctx.tent_measure(id);
                Ok((tr.get(id) / m).powf(1.0 / r) / (t1.get(id) / m))
            })
        }
        CharacteristicKind::BInfinity => binfinity_grid(ctx, &values, g),
        CharacteristicKind::Regularity => {
            let (mins, maxs) = kube_node_extrema(ctx, &values);
            sup_over_kubes(forest, g, |id| {
                let lo = mins.get(id);
                let hi = maxs.get(id);
                Ok(if lo > 0.0 && hi > 0.0 { hi / lo } else { 1.0 })
            })
        }
    }
}

/// Minimum of node values over every tent (sampled essential inf),
/// bottom-up over the tree.
fn tent_node_min(ctx: &TentCtx, values: &[f64]) -> crate::grid::TentTable {
    let chains = NodeChains::build(ctx.grid, ctx.forest, ctx.cap);
    let mut per = Vec::new();
    for (si, s) in ctx.forest.systems.iter().enumerate() {
        let mut tables: Vec<Vec<f64>> = (0..=ctx.cap)
            .map(|k| vec![f64::MAX; s.kube_count(k) as usize])
            .collect();
        for i in 0..ctx.grid.node_count() {
            let k = chains.depth[si][i];
            let j = chains.ancestor_index(si, i, k) as usize;
            let slot = &mut tables[k as usize][j];
            if values[i] < *slot {
                *slot = values[i];
            }
        }
        for k in (0..ctx.cap).rev() {
            for j in 0..s.kube_count(k) as usize {
                let mut mn = tables[k as usize][j];
                for c in 0..s.branching as usize {
                    mn = mn.min(tables[k as usize + 1][j * s.branching as usize + c]);
                }
                tables[k as usize][j] = mn;
            }
        }
        per.push(tables);
    }
    crate::grid::TentTable { per, cap: ctx.cap }
}

/// Per-kube min and max of node values (kubes partition the nodes by
/// generation band and arc).
fn kube_node_extrema(
    ctx: &TentCtx,
    values: &[f64],
) -> (crate::grid::TentTable, crate::grid::TentTable) {
    let chains = NodeChains::build(ctx.grid, ctx.forest, ctx.cap);
    let mut mins = Vec::new();
    let mut maxs = Vec::new();
    for (si, s) in ctx.forest.systems.iter().enumerate() {
        let mut mn: Vec<Vec<f64>> = (0..=ctx.cap)
            .map(|k| vec![f64::MAX; s.kube_count(k) as usize])
            .collect();
        let mut mx: Vec<Vec<f64>> = (0..=ctx.cap)
            .map(|k| vec![0.0; s.kube_count(k) as usize])
            .collect();
        for i in 0..ctx.grid.node_count() {
            // tail nodes beyond the cap pool into the deepest kube layer
            let k = chains.depth[si][i] as usize;
            let j = chains.ancestor_index(si, i, k as u32) as usize;
            mn[k][j] = mn[k][j].min(values[i]);
            mx[k][j] = mx[k][j].max(values[i]);
        }
        mins.push(mn);
        maxs.push(mx);
    }
    (
        crate::grid::TentTable {
            per: mins,
            cap: ctx.cap,
        },
        crate::grid::TentTable {
            per: maxs,
            cap: ctx.cap,
        },
    )
}

/// Grid-path `B_infinity`: for every outer tent, the inner dyadic maximal
/// function `M(sigma chi_tent)` is evaluated at each node as the larger of
/// the same-system chain maximum (sub-tents of the outer tent) and the
/// cross-system chain, whose terms need the mass of tent intersections;
/// intersections of sector annuli are arcs times annuli and are integrated
/// exactly with fractional end cells.
fn binfinity_grid(ctx: &TentCtx, values: &[f64], g: u32) -> Result<Characteristic> {
    let grid = ctx.grid;
    let forest = ctx.forest;
    let cap = g.min(ctx.cap);
    let chains = NodeChains::build(grid, forest, cap);
    let weighted: Vec<f64> = values
        .iter()
        .zip(&grid.weight)
        .map(|(v, w)| v * w)
        .collect();
    let prefix = RingPrefix::build(grid, &weighted);
    let table = crate::grid::tent_integrals(grid, &prefix, forest, cap);

    // per-node, per-system suffix maxima of chain tent-averages
    let stride = cap as usize + 1;
    let mut suffmax: Vec<Vec<f64>> = Vec::new();
    for (si, s) in forest.systems.iter().enumerate() {
        let mut sm = vec![0.0f64; grid.node_count() * stride];
        for i in 0..grid.node_count() {
            let deep = chains.depth[si][i];
            let mut run = f64::MIN;
            for k in (0..=deep).rev() {
                let id = KubeId {
                    system: s.index,
                    generation: k,
                    index: chains.ancestor_index(si, i, k),
                };
                run = run.max(table.get(id) / ctx.tent_measure(id));
                sm[i * stride + k as usize] = run;
            }
        }
        suffmax.push(sm);
    }

    // node buckets per (system, band<=cap, kube index)
    let mut buckets: Vec<Vec<Vec<Vec<usize>>>> = Vec::new();
    for (si, s) in forest.systems.iter().enumerate() {
        let mut b: Vec<Vec<Vec<usize>>> = (0..=cap)
            .map(|k| vec![Vec::new(); s.kube_count(k) as usize])
            .collect();
        for i in 0..grid.node_count() {
            let k = chains.depth[si][i] as usize;
            b[k][chains.ancestor_index(si, i, k as u32) as usize].push(i);
        }
        buckets.push(b);
    }

    let mut best = f64::MIN;
    let mut witness = KubeId {
        system: 0,
        generation: 0,
        index: 0,
    };
    for outer in forest.kube_ids(cap) {
        let sa = outer.system as usize;
        let souter = forest.system(outer.system);
        let okube = souter.kube(outer);
        let sigma_mass = table.get(outer);
        if sigma_mass <= 0.0 {
            continue;
        }
        let m = souter.branching as u64;
        // lazy cache of cross-tent intersection masses
        let mut cross_mass: HashMap<(u8, u32, u64), f64> = HashMap::new();
        let mut integral = 0.0;
        for band in outer.generation..=cap {
            let lo_j = outer.index * m.pow(band - outer.generation);
            let hi_j = (outer.index + 1) * m.pow(band - outer.generation);
            for j in lo_j..hi_j {
                for &i in &buckets[sa][band as usize][j as usize] {
                    let mut mx = suffmax[sa][i * stride + outer.generation as usize];
                    for (sb, other) in forest.systems.iter().enumerate() {
                        if sb == sa {
                            continue;
                        }
                        let deep = chains.depth[sb][i];
                        for kg in 0..=deep {
                            let jj = chains.ancestor_index(sb, i, kg);
                            let key = (other.index, kg, jj);
                            let mass = *cross_mass.entry(key).or_insert_with(|| {
                                intersection_mass(
                                    grid, &prefix, &okube, other, kg, jj,
                                )
                            });
                            let v = mass / other.tent_measure(kg);
                            if v > mx {
                                mx = v;
                            }
                        }
                    }
                    integral += mx * grid.weight[i];
                }
            }
        }
        let v = integral / sigma_mass;
        if v > best {
            best = v;
            witness = outer;
        }
    }
    Ok(Characteristic {
        value: best,
        witness,
    })
}

/// Mass of `sigma` over the intersection of the outer kube's tent with the
/// tent (system `other`, generation `kg`, index `jj`).
fn intersection_mass(
    grid: &QuadratureGrid,
    prefix: &RingPrefix,
    outer: &crate::dyadic::Kube,
    other: &crate::dyadic::DyadicSystem,
    kg: u32,
    jj: u64,
) -> f64 {
    let inner_r = outer.inner_radius.max(other.radii[kg as usize]);
    let aw = other.arc_width(kg);
    let astart = other.shift + jj as f64 * aw;
    if outer.id.generation == 0 {
        return prefix.sector_annulus(grid, inner_r, astart, aw);
    }
    // arc intersection on the circle: [b0, b0+bw) vs [a0, a0+aw)
    let (b0, bw) = (outer.arc_start, outer.arc_width);
    let rel = (astart - b0).rem_euclid(TAU);
    let mut total = 0.0;
    // candidate overlap pieces of [rel, rel+aw) with [0, bw) modulo 2pi
    for shift in [0.0, -TAU] {
        let lo = (rel + shift).max(0.0);
        let hi = (rel + shift + aw).min(bw);
        if hi > lo {
            total += prefix.sector_annulus(grid, inner_r, b0 + lo, hi - lo);
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Continuous characteristic over Carleson tents
// ---------------------------------------------------------------------------

/// Lower-bound estimate of the continuous `B_p` characteristic by a sweep
/// over sampled Carleson tents, with coverage guard.
pub fn continuous_bp(
    sigma: &Weight,
    p: f64,
    apexes: &[Complex64],
    grid: &QuadratureGrid,
) -> Result<(f64, Complex64)> {
    let pp = p / (p - 1.0);
    let values = sigma.values_on(grid);
    let mut best = f64::MIN;
    let mut wit = Complex64::new(0.0, 0.0);
    for &apex in apexes {
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        let mut mass = 0.0;
        let mut count = 0usize;
        for i in 0..grid.node_count() {
            if crate::geometry::in_carleson_tent(apex, grid.z[i]) {
                let w = grid.weight[i];
                m1 += values[i] * w;
                m2 += values[i].powf(1.0 - pp) * w;
                mass += w;
                count += 1;
            }
        }
        if count < 16 {
            return Err(Error::QuadratureCoverage {
                generation: 0,
                nodes: count,
                required: 16,
            });
        }
        let v = (m1 / mass) * (m2 / mass).powf(p - 1.0);
        if v > best {
            best = v;
            wit = apex;
        }
    }
    Ok((best, wit))
}

// ---------------------------------------------------------------------------
// Extrapolation exponent solver
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ExtrapolationParams {
    pub p: f64,
    pub p0: f64,
    pub r: f64,
    pub theta: f64,
    pub p1: f64,
    pub r_theta: f64,
    pub t_theta: f64,
}

fn extrapolation_exponents(p: f64, p0: f64, theta: f64) -> (f64, f64, f64) {
    let pp = p / (p - 1.0);
    let p0p = p0 / (p0 - 1.0);
    let p1 = (1.0 - theta) / (1.0 / p - theta / p0);
    let p1p = p1 / (p1 - 1.0);
    let r_th = p1 * (p0p + theta * p) / (p * p0p * (1.0 - theta));
    let t_th = p1p * (p0 + theta * pp) / (pp * p0 * (1.0 - theta));
    (p1, r_th, t_th)
}

/// Largest `theta` with `p1(theta)` a valid exponent and both interpolation
/// exponents `r(theta), t(theta)` within the reverse-Holder range `r`,
/// found by bisection to 1e-9. At `theta -> 0`: `p1 -> p`, `r = t = 1`.
pub fn extrapolation_params(p: f64, p0: f64, r: f64) -> Result<ExtrapolationParams> {
    assert!(p > 1.0 && p0 > 1.0 && r > 1.0);
    let pp = p / (p - 1.0);
    let p0p = p0 / (p0 - 1.0);
    // p1 stays in (1, inf) for theta below both ratios
    let theta_max = (p0 / p).min(p0p / pp).min(1.0) * (1.0 - 1e-12);
    let feasible = |theta: f64| -> bool {
        let (p1, r_th, t_th) = extrapolation_exponents(p, p0, theta);
        p1.is_finite() && p1 > 1.0 && r_th.max(t_th) <= r
    };
    let eps = 1e-9;
    if !feasible(eps) {
        let (_, r_th, t_th) = extrapolation_exponents(p, p0, eps);
        return Err(Error::ExtrapolationInfeasible {
            r_at_eps: r_th.max(t_th),
            target: r,
        });
    }
    let (mut lo, mut hi) = (eps, theta_max);
    if feasible(hi) {
        lo = hi;
    } else {
        while hi - lo > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let theta = lo;
    let (p1, r_th, t_th) = extrapolation_exponents(p, p0, theta);
    Ok(ExtrapolationParams {
        p,
        p0,
        r,
        theta,
        p1,
        r_theta: r_th,
        t_theta: t_th,
    })
}

// ---------------------------------------------------------------------------
// Predicted constants
// ---------------------------------------------------------------------------

/// The two closed-form bounds evaluated from measured characteristics: the
/// reverse-Holder bound `2/(1-rho) c^((r-1)/r)` at the admissible exponent
/// `r = 1 + 1/(2 alpha B_inf)`, and the weak-type bound
/// `ub1 * c^(1/(2 alpha B_inf + 1)) * log(e + B_inf)`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct PredictedConstants {
    pub rho: f64,
    pub alpha: f64,
    pub b_infinity: f64,
    pub c_sigma: f64,
    pub ub1: f64,
    pub r: f64,
    pub rh_bound: f64,
    pub weak_bound: f64,
}

pub fn predicted_constants(
    sigma: &Weight,
    u: &Symbol,
    forest: &DyadicForest,
    max_generation: u32,
    ctx: Option<&TentCtx>,
) -> Result<PredictedConstants> {
    let sc = forest.structure_constants(max_generation);
    let binf = characteristic(
        &CharacteristicKind::BInfinity,
        sigma,
        forest,
        max_generation,
        ctx,
    )?
    .value;
    let c_sigma = characteristic(
        &CharacteristicKind::Regularity,
        sigma,
        forest,
        max_generation,
        ctx,
    )?
    .value;
    let ub1 = characteristic(
        &CharacteristicKind::UB1(u.clone()),
        sigma,
        forest,
        max_generation,
        ctx,
    )?
    .value;
    let r = 1.0 + 1.0 / (2.0 * sc.alpha * binf);
    let rh_bound = 2.0 / (1.0 - sc.rho) * c_sigma.powf((r - 1.0) / r);
    let weak_bound = ub1
        * c_sigma.powf(1.0 / (2.0 * sc.alpha * binf + 1.0))
        * (std::f64::consts::E + binf).ln();
    Ok(PredictedConstants {
        rho: sc.rho,
        alpha: sc.alpha,
        b_infinity: binf,
        c_sigma,
        ub1,
        r,
        rh_bound,
        weak_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{build_forest, DyadicParams};
    use crate::grid::{build_grid, GridSpec};
    use approx::assert_abs_diff_eq;

    fn forest() -> DyadicForest {
        build_forest(DyadicParams::default(), 2).unwrap()
    }

    fn root() -> KubeId {
        KubeId {
            system: 0,
            generation: 0,
            index: 0,
        }
    }

    #[test]
    fn tent_averages_closed_forms() {
        let f = forest();
        let one = Weight::one();
        for k in [0u32, 1, 3] {
            let id = KubeId {
                system: 0,
                generation: k,
                index: 0,
            };
            assert_abs_diff_eq!(tent_average(&one, &f, id, 1.0, None).unwrap(), 1.0);
            assert_abs_diff_eq!(tent_average(&one, &f, id, 3.0, None).unwrap(), 1.0);
        }
        let half = Weight::power(0.5);
        assert_abs_diff_eq!(
            tent_average(&half, &f, root(), 1.0, None).unwrap(),
            2.0,
            epsilon = 1e-14
        );
        let k1 = KubeId {
            system: 0,
            generation: 1,
            index: 0,
        };
        assert_abs_diff_eq!(
            tent_average(&half, &f, k1, 1.0, None).unwrap(),
            2.0 * (9.0f64 / 8.0).sqrt(),
            epsilon = 1e-13
        );
        // divergence guard
        assert!(tent_average(&Weight::power(0.6), &f, root(), 2.0, None).is_err());
    }

    #[test]
    fn unit_weight_has_unit_characteristics() {
        let f = forest();
        let one = Weight::one();
        for kind in [
            CharacteristicKind::BpDyadic(2.0),
            CharacteristicKind::B1Dyadic,
            CharacteristicKind::UBp(Symbol::one(), 2.0),
            CharacteristicKind::UB1(Symbol::one()),
            CharacteristicKind::ReverseHolder(1.5),
            CharacteristicKind::BInfinity,
            CharacteristicKind::Regularity,
        ] {
            let c = characteristic(&kind, &one, &f, 12, None).unwrap();
            assert_abs_diff_eq!(c.value, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn power_weight_closed_form_characteristics() {
        let f = forest();
        let half = Weight::power(0.5);
        // [sigma_b]_{B_2^d} = 1/(1-b^2)
        let c = characteristic(&CharacteristicKind::BpDyadic(2.0), &half, &f, 12, None).unwrap();
        assert_abs_diff_eq!(c.value, 4.0 / 3.0, epsilon = 1e-12);
        // tent-independence: per-tent spread below 1e-10 checked via two gens
        for b in [0.1, 0.5, 0.9] {
            let w = Weight::power(b);
            let bp = |k: u32| {
                let id = KubeId {
                    system: 0,
                    generation: k,
                    index: 0,
                };
                let a1 = tent_average(&w, &f, id, 1.0, None).unwrap();
                let a2 = tent_average(&w, &f, id, -1.0, None).unwrap();
                a1 * a2
            };
            assert_abs_diff_eq!(bp(0), bp(7), epsilon = 1e-10);
            // closed form against 1/(1-b^2)
            assert_abs_diff_eq!(bp(3), 1.0 / (1.0 - b * b), epsilon = 1e-12);
        }
        // [sigma_{1/2}]_{RH_{3/2}} = 2^{1/3}
        let rh = characteristic(
            &CharacteristicKind::ReverseHolder(1.5),
            &half,
            &f,
            12,
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(rh.value, 2.0f64.powf(1.0 / 3.0), epsilon = 1e-12);
        // [sigma_b]_{B_1^d} = 1/(1-b)
        let b1 = characteristic(&CharacteristicKind::B1Dyadic, &half, &f, 12, None).unwrap();
        assert_abs_diff_eq!(b1.value, 2.0, epsilon = 1e-12);
        // scale invariance
        let scaled = Weight::scaled_power(7.3, 0.5);
        for kind in [
            CharacteristicKind::BpDyadic(2.0),
            CharacteristicKind::B1Dyadic,
            CharacteristicKind::ReverseHolder(1.5),
            CharacteristicKind::BInfinity,
            CharacteristicKind::Regularity,
        ] {
            let a = characteristic(&kind, &half, &f, 12, None).unwrap().value;
            let b = characteristic(&kind, &scaled, &f, 12, None).unwrap().value;
            assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn duality_of_power_weights() {
        let f = forest();
        for (b, p) in [(0.3, 2.0), (0.5, 4.0), (0.7, 1.5)] {
            let w = Weight::power(b);
            let pp = p / (p - 1.0);
            let a = characteristic(&CharacteristicKind::BpDyadic(p), &w, &f, 10, None)
                .unwrap()
                .value;
            let d = characteristic(&CharacteristicKind::BpDyadic(pp), &w.dual(p), &f, 10, None)
                .unwrap()
                .value;
            assert_abs_diff_eq!(a, d.powf(p - 1.0), epsilon = 1e-10 * a.max(1.0));
            // involution
            let back = w.dual(p).dual(pp);
            let (_, bb) = back.power_params().unwrap();
            assert_abs_diff_eq!(bb, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn regularity_constant_of_powers() {
        let f = forest();
        // c_sigma at G=12 for b=1/2 stays below 1.5 (limit sqrt(2))
        let c = characteristic(
            &CharacteristicKind::Regularity,
            &Weight::power(0.5),
            &f,
            12,
            None,
        )
        .unwrap();
        let expect = ((8193.0f64 * 8193.0) / (2.0 * 4097.0 * 4097.0)).sqrt();
        assert_abs_diff_eq!(c.value, expect, epsilon = 1e-12);
        assert!(c.value <= 1.5);
        assert_eq!(c.witness.generation, 12);
    }

    #[test]
    fn binfinity_power_frozen_values() {
        // frozen from the exact band-sum series at G=12
        let f = forest();
        for (b, expect) in [(0.1, 1.087218), (0.5, 1.743126), (0.9, 4.361135)] {
            let c = characteristic(
                &CharacteristicKind::BInfinity,
                &Weight::power(b),
                &f,
                12,
                None,
            )
            .unwrap();
            assert_abs_diff_eq!(c.value, expect, epsilon = 2e-6);
            assert_eq!(c.witness.generation, 0);
        }
        // monotone truncation: value at G=12 >= value at G=6
        for b in [0.3, 0.8] {
            let w = Weight::power(b);
            let lo = characteristic(&CharacteristicKind::BInfinity, &w, &f, 6, None)
                .unwrap()
                .value;
            let hi = characteristic(&CharacteristicKind::BInfinity, &w, &f, 12, None)
                .unwrap()
                .value;
            assert!(hi >= lo - 1e-14);
        }
        // decreasing radial weights have trivial truncated maximal chain
        let c = characteristic(
            &CharacteristicKind::BInfinity,
            &Weight::power(-0.5),
            &f,
            12,
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(c.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ub_characteristics_with_vanishing_symbol() {
        let f = forest();
        let u = Symbol::vanishing(1.0);
        let half = Weight::power(0.5);
        // the u-factor is 1 at the root and < 1 deeper, and the power-weight
        // product is tent independent, so the sup sits at the root and
        // equals the plain characteristic
        let ub = characteristic(
            &CharacteristicKind::UBp(u.clone(), 2.0),
            &half,
            &f,
            12,
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(ub.value, 4.0 / 3.0, epsilon = 1e-12);
        assert_eq!(ub.witness.generation, 0);
        let ub1 = characteristic(&CharacteristicKind::UB1(u), &half, &f, 12, None).unwrap();
        assert_abs_diff_eq!(ub1.value, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn grid_weight_paths_match_closed_forms() {
        let grid = build_grid(
            GridSpec {
                grid_generation: 7,
                angular_density: 12,
                radial_subdivision: 3,
                safety_radius: 0.9,
                tail_bands: 24,
            },
            0.5 * 2.0f64.ln(),
        )
        .unwrap();
        let f = build_forest(
            DyadicParams {
                max_generation: 6,
                ..Default::default()
            },
            2,
        )
        .unwrap();
        let ctx = TentCtx::new(&grid, &f);
        // sample sigma_{0.4} on the grid and compare against closed forms
        let w = Weight::power(0.4);
        let sampled = Weight::grid_sampled("sigma04", w.values_on(&grid));
        let exact = characteristic(&CharacteristicKind::BpDyadic(2.0), &w, &f, 6, None)
            .unwrap()
            .value;
        let approx =
            characteristic(&CharacteristicKind::BpDyadic(2.0), &sampled, &f, 6, Some(&ctx))
                .unwrap()
                .value;
        assert!((approx - exact).abs() / exact < 2e-2, "{approx} vs {exact}");
        let exact_rh = characteristic(&CharacteristicKind::ReverseHolder(1.4), &w, &f, 6, None)
            .unwrap()
            .value;
        let approx_rh = characteristic(
            &CharacteristicKind::ReverseHolder(1.4),
            &sampled,
            &f,
            6,
            Some(&ctx),
        )
        .unwrap()
        .value;
        assert!((approx_rh - exact_rh).abs() / exact_rh < 2e-2);
        // B_infinity grid path against the exact band sum
        let exact_bi = characteristic(&CharacteristicKind::BInfinity, &w, &f, 6, None)
            .unwrap()
            .value;
        let approx_bi =
            characteristic(&CharacteristicKind::BInfinity, &sampled, &f, 6, Some(&ctx))
                .unwrap()
                .value;
        assert!(
            (approx_bi - exact_bi).abs() / exact_bi < 3e-2,
            "{approx_bi} vs {exact_bi}"
        );
        // Jensen lower bound for a rough random positive weight
        let mut vals = vec![0.0; grid.node_count()];
        let mut state = 0x9e3779b97f4a7c15u64;
        for v in vals.iter_mut() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            *v = 0.2 + ((state >> 33) as f64 / 2f64.powi(31));
        }
        let rough = Weight::grid_sampled("rough", vals);
        for p in [1.5, 2.0, 3.0] {
            let c = characteristic(&CharacteristicKind::BpDyadic(p), &rough, &f, 6, Some(&ctx))
                .unwrap()
                .value;
            assert!(c >= 1.0 - 1e-12, "Jensen bound violated: {c}");
        }
    }

    #[test]
    fn continuous_bp_sandwich() {
        let grid = build_grid(GridSpec::default(), 0.5 * 2.0f64.ln()).unwrap();
        let one = Weight::one();
        let apexes = vec![
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(0.5, 1.0),
            Complex64::from_polar(0.8, 4.0),
        ];
        let (v, _) = continuous_bp(&one, 2.0, &apexes, &grid).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-6);
        // apex 0 tent is the whole disk: equals the dyadic closed form
        let half = Weight::power(0.5);
        let (v, wit) = continuous_bp(&half, 2.0, &apexes[..1], &grid).unwrap();
        assert_abs_diff_eq!(v, 4.0 / 3.0, epsilon = 1e-3);
        assert_eq!(wit, apexes[0]);
        // sandwich for the default sample: within [1, 4]
        let (v, _) = continuous_bp(&half, 2.0, &apexes, &grid).unwrap();
        assert!((1.0..=4.0).contains(&v), "continuous B_2 estimate {v}");
    }

    #[test]
    fn extrapolation_solver() {
        // p = p0 = 2, r = 1.1: theta = 1/21, r(theta) = t(theta) = 1.1
        let e = extrapolation_params(2.0, 2.0, 1.1).unwrap();
        assert_abs_diff_eq!(e.theta, 1.0 / 21.0, epsilon = 1e-7);
        assert!(e.r_theta.max(e.t_theta) <= 1.1 + 1e-12);
        assert!(e.r_theta.max(e.t_theta) >= 1.1 - 1e-6);
        assert_abs_diff_eq!(e.p1, 2.0, epsilon = 1e-9);
        // interpolation identity 1/p = theta/p0 + (1-theta)/p1
        for (p, p0, r) in [(2.0, 2.0, 1.1), (3.0, 2.0, 1.5), (1.5, 4.0, 1.2)] {
            let e = extrapolation_params(p, p0, r).unwrap();
            assert_abs_diff_eq!(
                1.0 / p,
                e.theta / p0 + (1.0 - e.theta) / e.p1,
                epsilon = 1e-12
            );
            assert!(e.r_theta.max(e.t_theta) <= r + 1e-9);
            assert!(e.theta > 0.0 && e.theta < 1.0);
        }
        // theta -> 0 limit: r(0) = t(0) = 1
        let (_, r0, t0) = extrapolation_exponents(2.7, 1.8, 0.0);
        assert_abs_diff_eq!(r0, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t0, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn predicted_constant_formulas() {
        let f = forest();
        let pc = predicted_constants(&Weight::one(), &Symbol::one(), &f, 12, None).unwrap();
        // rh_bound = 2/(1-8/9) * 1 = 18
        assert_abs_diff_eq!(pc.rh_bound, 18.0, epsilon = 1e-9);
        assert_abs_diff_eq!(pc.b_infinity, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            pc.weak_bound,
            (std::f64::consts::E + 1.0).ln(),
            epsilon = 1e-12
        );
        let pc = predicted_constants(&Weight::power(0.5), &Symbol::one(), &f, 12, None).unwrap();
        assert!(pc.c_sigma <= 1.5);
        assert!(pc.rh_bound > 18.0 && pc.rh_bound < 19.0);
    }

    #[test]
    fn weight_parse_roundtrip() {
        let w = Weight::parse("power:b=0.5").unwrap();
        assert_eq!(w.power_params(), Some((1.0, 0.5)));
        let w = Weight::parse("product:[power:b=0.3;power:b=0.2]").unwrap();
        let (s, b) = w.power_params().unwrap();
        assert_abs_diff_eq!(b, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s, 1.0);
        assert!(Weight::parse("garbage").is_err());
        assert_eq!(Weight::parse("one").unwrap().power_params(), Some((1.0, 0.0)));
    }

    #[test]
    fn table_weight_lookup() {
        let mut entries = Vec::new();
        for i in 0..8 {
            for j in 0..16 {
                let r = i as f64 / 8.0;
                let th = j as f64 * TAU / 16.0;
                entries.push((r, th, 1.0 + 0.5 * th.cos() * r));
            }
        }
        let t = TableWeight::from_rows("test", entries).unwrap();
        // nearest node at (0.5, 0)
        assert_abs_diff_eq!(
            t.lookup(Complex64::new(0.5, 0.01)),
            1.25,
            epsilon = 1e-12
        );
        // wraparound angle
        let v = t.lookup(Complex64::from_polar(0.5, TAU - 0.01));
        assert_abs_diff_eq!(v, 1.25, epsilon = 1e-12);
        assert!(TableWeight::from_rows("bad", vec![(0.1, 0.0, -1.0)]).is_err());
    }
}
