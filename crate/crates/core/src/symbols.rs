//! Bounded symbols for Toeplitz operators, with tent-sup estimators.
//!
//! Sups of `|u|` over tents are essential sups in the theory; on the
//! symbol families here they are either exact (radial monotone profiles,
//! indicators with known geometry) or sampled maxima over grid nodes,
//! which are documented lower bounds.

use crate::dyadic::Kube;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub enum SymbolForm {
    /// u == 1
    One,
    /// u(w) = |w|^2
    ModSquared,
    /// u(w) = (1-|w|^2)^a with a > 0; vanishes at the boundary
    Vanishing { a: f64 },
    /// u(w) = (1-|w|^2)^{-b}; bounded only for b <= 0
    Power { b: f64 },
    /// u(w) = w^m
    Monomial { m: u32 },
    /// indicator of the annulus r1 < |w| < r2
    AnnulusIndicator { r1: f64, r2: f64 },
    /// indicator of the right half-plane Re w > 0
    HalfPlane,
    /// arbitrary evaluator with an optional Lipschitz modulus for the
    /// sampled tent-sup correction
    Custom {
        name: String,
        eval: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
        lipschitz: Option<f64>,
    },
}

#[derive(Clone)]
pub struct Symbol {
    pub form: SymbolForm,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.name())
    }
}

impl Symbol {
    pub fn one() -> Self {
        Symbol {
            form: SymbolForm::One,
        }
    }

    pub fn mod_squared() -> Self {
        Symbol {
            form: SymbolForm::ModSquared,
        }
    }

    pub fn vanishing(a: f64) -> Self {
        Symbol {
            form: SymbolForm::Vanishing { a },
        }
    }

    pub fn monomial(m: u32) -> Self {
        Symbol {
            form: SymbolForm::Monomial { m },
        }
    }

    pub fn annulus(r1: f64, r2: f64) -> Self {
        Symbol {
            form: SymbolForm::AnnulusIndicator { r1, r2 },
        }
    }

    pub fn half_plane() -> Self {
        Symbol {
            form: SymbolForm::HalfPlane,
        }
    }

    pub fn power(b: f64) -> Result<Self> {
        if b > 0.0 {
            return Err(Error::UnboundedSymbol(format!(
                "power:b={b} grows at the boundary"
            )));
        }
        Ok(Symbol {
            form: SymbolForm::Power { b },
        })
    }

    pub fn name(&self) -> String {
        match &self.form {
            SymbolForm::One => "one".into(),
            SymbolForm::ModSquared => "modsq".into(),
            SymbolForm::Vanishing { a } => format!("vanishing:a={a}"),
            SymbolForm::Power { b } => format!("power:b={b}"),
            SymbolForm::Monomial { m } => format!("monomial:m={m}"),
            SymbolForm::AnnulusIndicator { r1, r2 } => format!("indicator:annulus({r1},{r2})"),
            SymbolForm::HalfPlane => "halfplane".into(),
            SymbolForm::Custom { name, .. } => name.clone(),
        }
    }

    /// Raise |u| to a power, for the adjoint route through `u^{p-1}`.
    /// Supported on the radial profiles and indicators.
    pub fn abs_pow(&self, e: f64) -> Result<Symbol> {
        match &self.form {
            SymbolForm::One => Ok(Symbol::one()),
            SymbolForm::Vanishing { a } => Ok(Symbol::vanishing(a * e)),
            SymbolForm::Power { b } => Symbol::power(b * e),
            SymbolForm::ModSquared => {
                let ee = e;
                Ok(Symbol {
                    form: SymbolForm::Custom {
                        name: format!("modsq^{e}"),
                        eval: Arc::new(move |w: Complex64| {
                            Complex64::new(w.norm_sqr().powf(ee), 0.0)
                        }),
                        lipschitz: Some(2.0 * ee.max(1.0)),
                    },
                })
            }
            SymbolForm::AnnulusIndicator { r1, r2 } => Ok(Symbol::annulus(*r1, *r2)),
            SymbolForm::HalfPlane => Ok(Symbol::half_plane()),
            SymbolForm::Monomial { .. } | SymbolForm::Custom { .. } => Err(Error::SymbolSpec(
                format!("abs_pow unsupported for {}", self.name()),
            )),
        }
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        match &self.form {
            SymbolForm::One => Complex64::new(1.0, 0.0),
            SymbolForm::ModSquared => Complex64::new(w.norm_sqr(), 0.0),
            SymbolForm::Vanishing { a } => Complex64::new((1.0 - w.norm_sqr()).powf(*a), 0.0),
            SymbolForm::Power { b } => Complex64::new((1.0 - w.norm_sqr()).powf(-b), 0.0),
            SymbolForm::Monomial { m } => w.powu(*m),
            SymbolForm::AnnulusIndicator { r1, r2 } => {
                let r = w.norm();
                Complex64::new(if r > *r1 && r < *r2 { 1.0 } else { 0.0 }, 0.0)
            }
            SymbolForm::HalfPlane => Complex64::new(if w.re > 0.0 { 1.0 } else { 0.0 }, 0.0),
            SymbolForm::Custom { eval, .. } => eval(w),
        }
    }

    /// Does the closed form of the tent sup exist for this symbol?
    pub fn has_exact_tent_sup(&self) -> bool {
        !matches!(self.form, SymbolForm::Custom { .. })
    }

    /// `||u||_{L^inf(tent K)}` for the tent `{r_k < |w| < 1} x arc`.
    ///
    /// Exact for the built-in forms; `None` for custom evaluators (callers
    /// fall back to the sampled strategy).
    pub fn exact_tent_sup(&self, kube: &Kube) -> Option<f64> {
        let rk = kube.inner_radius;
        match &self.form {
            SymbolForm::One => Some(1.0),
            SymbolForm::ModSquared | SymbolForm::Monomial { .. } => Some(1.0),
            SymbolForm::Vanishing { a } => Some((1.0 - rk * rk).powf(*a)),
            SymbolForm::Power { b } => Some((1.0 - rk * rk).powf(-b)), // b <= 0
            SymbolForm::AnnulusIndicator { r1: _, r2 } => Some(if *r2 > rk { 1.0 } else { 0.0 }),
            SymbolForm::HalfPlane => {
                if kube.id.generation == 0 {
                    return Some(1.0);
                }
                // positive-measure intersection of the arc with (-pi/2, pi/2)
                let a = kube.arc_start.rem_euclid(TAU);
                let w = kube.arc_width;
                let half = std::f64::consts::FRAC_PI_2;
                // test both lifts of the target interval
                for base in [-TAU, 0.0, TAU] {
                    let lo = (-half) + base;
                    let hi = half + base;
                    if a < hi && a + w > lo {
                        return Some(1.0);
                    }
                }
                Some(0.0)
            }
            SymbolForm::Custom { .. } => None,
        }
    }

    pub fn lipschitz(&self) -> Option<f64> {
        match &self.form {
            SymbolForm::Custom { lipschitz, .. } => *lipschitz,
            _ => None,
        }
    }

    /// Parse the symbol mini-language:
    /// `one | modsq | vanishing:a=<x> | power:b=<x> | monomial:m=<n> |
    /// indicator:annulus(<r1>,<r2>) | halfplane`.
    pub fn parse(spec: &str) -> Result<Symbol> {
        let s = spec.trim();
        let bad = |m: &str| Error::SymbolSpec(format!("{m}: `{s}`"));
        if s == "one" {
            return Ok(Symbol::one());
        }
        if s == "modsq" {
            return Ok(Symbol::mod_squared());
        }
        if s == "halfplane" {
            return Ok(Symbol::half_plane());
        }
        if let Some(rest) = s.strip_prefix("vanishing:a=") {
            let a: f64 = rest.parse().map_err(|_| bad("bad exponent"))?;
            return Ok(Symbol::vanishing(a));
        }
        if let Some(rest) = s.strip_prefix("power:b=") {
            let b: f64 = rest.parse().map_err(|_| bad("bad exponent"))?;
            return Symbol::power(b);
        }
        if let Some(rest) = s.strip_prefix("monomial:m=") {
            let m: u32 = rest.parse().map_err(|_| bad("bad degree"))?;
            return Ok(Symbol::monomial(m));
        }
        if let Some(rest) = s.strip_prefix("indicator:annulus(") {
            let inner = rest.strip_suffix(')').ok_or_else(|| bad("missing )"))?;
            let parts: Vec<&str> = inner.split(',').collect();
            if parts.len() != 2 {
                return Err(bad("need two radii"));
            }
            let r1: f64 = parts[0].trim().parse().map_err(|_| bad("bad radius"))?;
            let r2: f64 = parts[1].trim().parse().map_err(|_| bad("bad radius"))?;
            return Ok(Symbol::annulus(r1, r2));
        }
        Err(bad("unknown symbol form"))
    }
}
