//! Registry of lower and upper bounds per intrinsic dimension and the
//! lower ≤ upper consistency check.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{lower_band, lower_focal, lower_petrunin, lower_sphere_a, lower_sphere_b, sphere_crossover, veronese_dims};
use crate::error::{Error, Result};

const COMPARE_TOL: f64 = 1e-12;
const MAX_REPORT_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Where the curvature is measured: Euclidean curvature inside a unit ball,
/// or intrinsic curvature inside a unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Ball,
    Sphere,
}

/// Manifolds a lower bound covers, or the manifold an upper bound realizes.
/// Nested: `Torus ⊂ NoPsc ⊂ AllClosed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifoldClass {
    Torus,
    NoPsc,
    AllClosed,
}

impl ManifoldClass {
    fn tag(self) -> &'static str {
        match self {
            ManifoldClass::Torus => "torus",
            ManifoldClass::NoPsc => "no-psc",
            ManifoldClass::AllClosed => "all-closed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub n: usize,
    /// Dimension of the ambient ball or sphere; `None` when the bound holds
    /// in every dimension.
    pub ambient: Option<usize>,
    pub side: Side,
    pub label: String,
    pub value: f64,
    pub space: Space,
    pub class: ManifoldClass,
    /// The closed form was negative and the value was raised to 0.
    pub clamped: bool,
}

impl BoundEntry {
    fn new(n: usize, ambient: Option<usize>, side: Side, label: &str, value: f64, space: Space, class: ManifoldClass) -> Self {
        BoundEntry { n, ambient, side, label: label.to_string(), value: value.max(0.0), space, class, clamped: value < 0.0 }
    }

    pub fn source_tag(&self) -> String {
        let space = match self.space {
            Space::Ball => "ball",
            Space::Sphere => "sphere",
        };
        let mut tag = format!("{space}/{}", self.class.tag());
        if self.clamped {
            tag.push_str("/clamped");
        }
        tag
    }

    /// Whether the lower bound `self` constrains the immersion behind `upper`.
    pub fn applies_to(&self, upper: &BoundEntry) -> bool {
        self.side == Side::Lower
            && upper.side == Side::Upper
            && self.n == upper.n
            && self.space == upper.space
            && upper.class <= self.class
            && match (self.ambient, upper.ambient) {
                (None, _) => true,
                (Some(l), Some(u)) => u <= l,
                (Some(_), None) => false,
            }
    }
}

impl fmt::Display for BoundEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let amb = self.ambient.map_or("unbounded".to_string(), |a| a.to_string());
        write!(f, "{:?} {} = {:.12} (n={}, ambient {amb}, {})", self.side, self.label, self.value, self.n, self.source_tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub lower: BoundEntry,
    pub upper: BoundEntry,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct R2Check {
    pub n: usize,
    pub r2: f64,
    pub product: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n_min: usize,
    pub n_max: usize,
    pub entries: Vec<BoundEntry>,
    pub violations: Vec<Violation>,
    pub r2_checks: Vec<R2Check>,
    pub notes: Vec<String>,
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn lower_entries(n: usize) -> Result<Vec<BoundEntry>> {
    use ManifoldClass::*;
    use Side::Lower;
    use Space::*;
    let mut v = vec![
        BoundEntry::new(n, None, Lower, "unit", 1.0, Ball, AllClosed),
        BoundEntry::new(n, None, Lower, "B★", lower_petrunin(n)?, Ball, NoPsc),
        BoundEntry::new(n, Some(n + 1), Lower, "band", lower_band(n)?.raw, Ball, Torus),
        BoundEntry::new(n, Some(n + 1), Lower, "j_nu", lower_focal(n + 1, 1.0)?, Ball, NoPsc),
        BoundEntry::new(n, None, Lower, "B", lower_sphere_b(n)?, Sphere, NoPsc),
    ];
    let mut ks = vec![1, n.saturating_sub(1).max(1)];
    ks.dedup();
    for k in ks {
        v.push(BoundEntry::new(n, Some(n + k), Lower, "A", lower_sphere_a(n, k)?, Sphere, NoPsc));
    }
    Ok(v)
}

fn upper_entries(n: usize) -> Vec<BoundEntry> {
    use ManifoldClass::*;
    use Side::Upper;
    use Space::*;
    let nf = n as f64;
    let torus_if = |cond: bool| if cond { Torus } else { AllClosed };
    // a degree-4 design needs at most dim(quartics on R^n) points
    let design_ambient = 2 * binomial(n + 3, 4);
    let veronese_ambient = n * (n + 3) / 2;
    let mut v = vec![
        BoundEntry::new(n, Some(n + 1), Upper, "round-sphere", 1.0, Ball, torus_if(n == 1)),
        BoundEntry::new(n, Some(2 * n), Upper, "clifford", nf.sqrt(), Ball, Torus),
        BoundEntry::new(n, Some(2 * n - 1), Upper, "clifford", (nf - 1.0).sqrt(), Sphere, Torus),
        BoundEntry::new(n, Some(design_ambient), Upper, "design-torus", (3.0 * nf / (nf + 2.0)).sqrt(), Ball, Torus),
        BoundEntry::new(
            n,
            Some(design_ambient - 1),
            Upper,
            "design-torus",
            ((2.0 * nf - 2.0) / (nf + 2.0)).sqrt(),
            Sphere,
            Torus,
        ),
        BoundEntry::new(n, Some(n + 1), Upper, "torus-codim1", 6.0 * nf.powf(1.5), Ball, Torus),
        BoundEntry::new(n, Some(veronese_ambient), Upper, "veronese-RPn", (2.0 * nf / (nf + 1.0)).sqrt(), Ball, torus_if(n == 1)),
    ];
    if n >= 2 {
        v.push(BoundEntry::new(
            n,
            Some(veronese_ambient - 1),
            Upper,
            "veronese-RPn",
            ((nf - 1.0) / (nf + 1.0)).sqrt(),
            Sphere,
            AllClosed,
        ));
        v.push(BoundEntry::new(n, Some(n + 1), Upper, "codim1-pair", 3.0, Ball, torus_if(n == 2)));
    }
    if n >= 3 {
        v.push(BoundEntry::new(n, Some(n + 1), Upper, "codim1-triple", 1.0 + 2.0 * 2f64.sqrt(), Ball, torus_if(n == 3)));
    }
    // S^{20k²} × X^k in B^{20k²+k+1}
    if let Some(k) = (1..=n).find(|&k| 20 * k * k + k == n) {
        let kf = k as f64;
        let c = 1.0 + 2.0 * (3.0 * (kf + 1.0) / (kf + 3.0)).sqrt();
        v.push(BoundEntry::new(n, Some(n + 1), Upper, "codim1-general", c, Ball, AllClosed));
    }
    // (S^m)^{m+2} in B^{m(m+2)+1}
    if let Some(m) = (1..=n).find(|&m| m * (m + 2) == n) {
        let c = 1.0 + 2.0 * ((m + 1) as f64).sqrt();
        v.push(BoundEntry::new(n, Some(n + 1), Upper, "codim1-power", c, Ball, torus_if(m == 1)));
    }
    v
}

/// Upper-bound constructions for intrinsic dimension `n`.
pub fn upper_constructions(n: usize) -> Result<Vec<BoundEntry>> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    Ok(upper_entries(n))
}

/// Lower bounds for intrinsic dimension `n`, negative closed forms clamped.
pub fn lower_bounds(n: usize) -> Result<Vec<BoundEntry>> {
    lower_entries(n)
}

struct DimReport {
    entries: Vec<BoundEntry>,
    violations: Vec<Violation>,
    r2: R2Check,
    notes: Vec<String>,
}

fn report_dim(n: usize) -> Result<DimReport> {
    let lowers = lower_entries(n)?;
    let uppers = upper_entries(n);
    let mut violations = Vec::new();
    for l in &lowers {
        for u in uppers.iter().filter(|u| l.applies_to(u)) {
            if l.value > u.value + COMPARE_TOL {
                violations.push(Violation { lower: l.clone(), upper: u.clone(), excess: l.value - u.value });
            }
        }
    }
    let r2 = veronese_dims(n, 2)?.r_s;
    let nf = n as f64;
    let product = r2 * (2.0 * nf / (nf + 1.0)).sqrt();
    let mut notes = Vec::new();
    let band = lower_band(n)?;
    if band.clamped {
        notes.push(format!("n={n}: band bound (n+1)/pi - 1 = {:.6} is negative, clamped to 0", band.raw));
    } else if band.weak {
        notes.push(format!("n={n}: band bound {:.6} is below the trivial bound 1", band.raw));
    }
    if let Some(k) = sphere_crossover(n)? {
        if n >= 2 {
            notes.push(format!("n={n}: sphere bound A beats B for codimension k <= {k}"));
        }
    }
    let mut entries = lowers;
    entries.extend(uppers);
    Ok(DimReport { entries, violations, r2: R2Check { n, r2, product, ok: (product - 2.0).abs() <= COMPARE_TOL }, notes })
}

/// Every registered bound for `n_min..=n_max`, with violations of
/// lower ≤ upper between compatible pairs and the `R₂(n)·curv = 2` check.
pub fn report(n_min: usize, n_max: usize) -> Result<BoundsReport> {
    if !(1 <= n_min && n_min <= n_max && n_max <= MAX_REPORT_DIM) {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n_min <= n_max <= {MAX_REPORT_DIM}, got {n_min}..{n_max}"
        )));
    }
    let dims: Vec<DimReport> = (n_min..=n_max).into_par_iter().map(report_dim).collect::<Result<_>>()?;
    let mut out = BoundsReport {
        n_min,
        n_max,
        entries: Vec::new(),
        violations: Vec::new(),
        r2_checks: Vec::new(),
        notes: vec!["j_0 = 2.404825557695773 from the series solver; the printed value 2.4042 differs in the fourth decimal".into()],
    };
    for d in dims {
        out.entries.extend(d.entries);
        out.violations.extend(d.violations);
        out.r2_checks.push(d.r2);
        out.notes.extend(d.notes);
    }
    Ok(out)
}

impl BoundsReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.r2_checks.iter().all(|c| c.ok)
    }

    /// Columns `n, ambient, side, label, value, source_tag`.
    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "ambient", "side", "label", "value", "source_tag"])?;
        for e in &self.entries {
            let side = match e.side {
                Side::Lower => "lower",
                Side::Upper => "upper",
            };
            w.write_record([
                e.n.to_string(),
                e.ambient.map_or("unbounded".to_string(), |a| a.to_string()),
                side.to_string(),
                e.label.clone(),
                format!("{:?}", e.value),
                e.source_tag(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes CSV for a `.csv` path and JSON otherwise.
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            self.to_csv_string()?
        } else {
            self.to_json_string()
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find<'a>(es: &'a [BoundEntry], label: &str, space: Space) -> Vec<&'a BoundEntry> {
        es.iter().filter(|e| e.label == label && e.space == space).collect()
    }

    #[test]
    fn registry_examples() {
        let u2 = upper_constructions(2).unwrap();
        let cl = find(&u2, "clifford", Space::Ball)[0];
        assert_eq!(cl.ambient, Some(4));
        assert!((cl.value - 2f64.sqrt()).abs() < 1e-15);
        let pair = find(&u2, "codim1-pair", Space::Ball)[0];
        assert_eq!((pair.ambient, pair.value, pair.class), (Some(3), 3.0, ManifoldClass::Torus));
        let u3 = upper_constructions(3).unwrap();
        let tri = find(&u3, "codim1-triple", Space::Ball)[0];
        assert_eq!(tri.ambient, Some(4));
        assert!((tri.value - 3.8284).abs() < 1e-4 && tri.value < 4.0);
        assert!(find(&u3, "codim1-power", Space::Ball)[0].value == tri.value);
        let u4 = upper_constructions(4).unwrap();
        let ver = find(&u4, "veronese-RPn", Space::Ball)[0];
        assert_eq!(ver.ambient, Some(14));
        assert!((ver.value - 1.2649).abs() < 1e-4);
        assert_eq!(find(&upper_constructions(21).unwrap(), "codim1-general", Space::Ball).len(), 1);
        assert_eq!(find(&upper_constructions(8).unwrap(), "codim1-power", Space::Ball)[0].value, 1.0 + 2.0 * 3f64.sqrt());
        assert!(upper_constructions(0).is_err());
    }

    #[test]
    fn compatibility_rules() {
        let l = lower_bounds(9).unwrap();
        let u = upper_constructions(9).unwrap();
        let band = find(&l, "band", Space::Ball)[0];
        let clifford = find(&u, "clifford", Space::Ball)[0];
        // the band bound lives in B^{n+1}; Clifford needs B^{2n}
        assert!(!band.applies_to(clifford));
        let bstar = find(&l, "B★", Space::Ball)[0];
        assert!(bstar.applies_to(clifford));
        // B★ is about manifolds without PSC; the round sphere is not one
        assert!(!bstar.applies_to(find(&u, "round-sphere", Space::Ball)[0]));
        assert!(find(&l, "unit", Space::Ball)[0].applies_to(find(&u, "round-sphere", Space::Ball)[0]));
        assert!(!bstar.applies_to(find(&u, "clifford", Space::Sphere)[0]));
        assert!(!clifford.applies_to(bstar));
    }

    #[test]
    fn sixteen_dimensions_are_consistent() {
        let r = report(1, 16).unwrap();
        assert!(r.violations.is_empty(), "{:#?}", r.violations);
        assert!(r.ok());
        assert_eq!(r.r2_checks.len(), 16);
        assert!(r.entries.iter().all(|e| e.value >= 0.0));
        // unbounded lower bounds sit below every upper bound of the same space
        for n in 1..=16 {
            let lows = r.entries.iter().filter(|e| e.n == n && e.side == Side::Lower && e.ambient.is_none());
            for l in lows {
                for u in r.entries.iter().filter(|e| e.n == n && e.side == Side::Upper && l.applies_to(e)) {
                    assert!(l.value <= u.value + COMPARE_TOL, "{l} vs {u}");
                }
            }
        }
        let n2: Vec<f64> = ["B★", "clifford", "codim1-pair"]
            .iter()
            .map(|lab| find(&r.entries, lab, Space::Ball).iter().find(|e| e.n == 2).unwrap().value)
            .collect();
        assert!(n2[0] <= n2[1] && n2[1] <= n2[2]);
        assert!(r.entries.iter().any(|e| e.n == 2 && e.label == "band" && e.clamped));
    }

    #[test]
    fn tampered_lower_bound_is_reported() {
        let mut d = report_dim(2).unwrap();
        assert!(d.violations.is_empty());
        let l = d.entries.iter_mut().find(|e| e.label == "B★").unwrap();
        l.value = 1.5;
        let l = l.clone();
        let bad: Vec<_> = d.entries.iter().filter(|u| l.applies_to(u) && l.value > u.value + COMPARE_TOL).collect();
        assert!(bad.iter().any(|u| u.label == "clifford"));
        d.violations.clear();
    }

    #[test]
    fn range_checks_and_output() {
        assert!(report(0, 3).is_err() && report(4, 3).is_err() && report(1, 65).is_err());
        let r = report(1, 64).unwrap();
        assert!(r.ok(), "{:#?}", r.violations);
        let small = report(2, 3).unwrap();
        let csv = small.to_csv_string().unwrap();
        assert!(csv.starts_with("n,ambient,side,label,value,source_tag\n"));
        assert_eq!(csv.lines().count(), small.entries.len() + 1);
        assert!(csv.contains("unbounded"));
        let json: serde_json::Value = serde_json::from_str(&small.to_json_string()).unwrap();
        assert_eq!(json["entries"].as_array().unwrap().len(), small.entries.len());
        assert_eq!(report(1, 10).unwrap(), report(1, 10).unwrap());
    }
}
