//! Scenario configuration: a line-based `key = value` format under
//! `[section]` headers.
//!
//! ```text
//! # comment lines start with '#'
//! [condensate]
//! c_s_si = 1e-3          # sound speed, m/s   (or give m, g, rho instead)
//! xi_si  = 1e-6          # healing length, m
//!
//! [drive]
//! Omega1   = 1e7         # Rabi amplitudes, ordinary Hz
//! Omega2   = 1e7
//! Delta    = 1e13        # large detuning, ordinary Hz
//! delta_Hz = 100         # two-photon detuning, ordinary Hz, > 0
//! kappa    = -0.6        # optional wavenumber mismatch (internal 1/length);
//!                        # omitted: mode-matched to delta_Hz
//!
//! [pulse]
//! shape = rectangular    # rectangular | blackman | raised-cosine
//! T     = auto-pi        # seconds, or auto-pi for the exact swap duration
//!
//! [scan]
//! parameter = delta_offset_over_g    # or k_xi
//! range     = -4:4
//! points    = 11
//!
//! [output]
//! directory = out
//! formats   = both       # csv | json | both
//! ```
//!
//! All frequencies in the file are ordinary Hz and are multiplied by 2π on
//! ingestion. Validation collects every violation, not just the first;
//! duplicate keys report both line numbers; unknown sections and keys are
//! rejected.

use becphonon::error::Error as CoreError;
use becphonon::lambda::RamanDrive;
use becphonon::pulse::EnvelopeShape;
use becphonon::units::{CondensateParams, SiConversion};
use becphonon::bogoliubov::dispersion;
use num_complex::Complex64;

/// One validation or syntax problem, with the line it came from when the
/// problem is attached to a specific line.
#[derive(Debug, Clone)]
pub struct ConfigIssue {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

fn issue(line: Option<usize>, message: impl Into<String>) -> ConfigIssue {
    ConfigIssue { line, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CondensateSection {
    Internal { m: f64, g: f64, rho: f64 },
    /// SI pair: sound speed (m/s) and healing length (m). Internally this
    /// normalizes to m = g = rho = 1 with the unit bridge set accordingly.
    Si { c_s: f64, xi: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct DriveSection {
    pub omega1_hz: f64,
    pub omega2_hz: f64,
    pub delta_big_hz: f64,
    pub delta_hz: f64,
    pub kappa: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseDuration {
    /// Exact swap duration π/(2 g_eff) for the resolved setup (shaped
    /// envelopes scale to the same pulse area).
    AutoPi,
    Seconds(f64),
}

#[derive(Debug, Clone, Copy)]
pub struct PulseSection {
    pub shape: EnvelopeShape,
    pub duration: PulseDuration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanParameter {
    /// Detuning offset in units of g_eff (lineshape scans).
    DeltaOffsetOverG,
    /// Dimensionless k·ξ (dispersion / coupling scans).
    KXi,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanSection {
    pub parameter: ScanParameter,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formats {
    Csv,
    Json,
    Both,
}

impl Formats {
    pub fn writes_csv(&self) -> bool {
        matches!(self, Formats::Csv | Formats::Both)
    }

    pub fn writes_json(&self) -> bool {
        matches!(self, Formats::Json | Formats::Both)
    }
}

#[derive(Debug, Clone)]
pub struct OutputSection {
    pub directory: String,
    pub formats: Formats,
}

/// Parsed and schema-validated scenario.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub condensate: CondensateSection,
    pub drive: DriveSection,
    pub pulse: PulseSection,
    pub scan: Option<ScanSection>,
    pub output: OutputSection,
    /// Input provenance: (name, "config" | "default" | "derived ...").
    pub sources: Vec<(String, String)>,
}

const SECTIONS: &[&str] = &["condensate", "drive", "pulse", "scan", "output"];

fn known_keys(section: &str) -> &'static [&'static str] {
    match section {
        "condensate" => &["m", "g", "rho", "c_s_si", "xi_si"],
        "drive" => &["Omega1", "Omega2", "Delta", "delta_Hz", "kappa"],
        "pulse" => &["shape", "T"],
        "scan" => &["parameter", "range", "points"],
        "output" => &["directory", "formats"],
        _ => &[],
    }
}

struct RawConfig {
    // (section, key) -> (line, value)
    entries: std::collections::BTreeMap<(String, String), (usize, String)>,
}

impl RawConfig {
    fn get(&self, section: &str, key: &str) -> Option<&(usize, String)> {
        self.entries.get(&(section.to_string(), key.to_string()))
    }

    fn number(&self, section: &str, key: &str, issues: &mut Vec<ConfigIssue>) -> Option<f64> {
        let (line, value) = self.get(section, key)?;
        match value.parse::<f64>() {
            Ok(x) if x.is_finite() => Some(x),
            _ => {
                issues.push(issue(
                    Some(*line),
                    format!("[{section}] {key}: expected a finite number, got '{value}'"),
                ));
                None
            }
        }
    }
}

fn tokenize(text: &str, issues: &mut Vec<ConfigIssue>) -> RawConfig {
    let mut entries = std::collections::BTreeMap::new();
    let mut section: Option<String> = None;
    let mut section_known = false;

    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            match name.strip_suffix(']') {
                Some(name) => {
                    let name = name.trim().to_string();
                    section_known = SECTIONS.contains(&name.as_str());
                    if !section_known {
                        issues.push(issue(
                            Some(lineno),
                            format!(
                                "unknown section [{name}]; expected one of {}",
                                SECTIONS.join(", ")
                            ),
                        ));
                    }
                    section = Some(name);
                }
                None => issues.push(issue(Some(lineno), "unterminated section header")),
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            issues.push(issue(Some(lineno), format!("expected 'key = value', got '{line}'")));
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let Some(section_name) = section.clone() else {
            issues.push(issue(Some(lineno), format!("key '{key}' appears before any [section]")));
            continue;
        };
        if !section_known {
            continue; // section already reported
        }
        if !known_keys(&section_name).contains(&key.as_str()) {
            issues.push(issue(
                Some(lineno),
                format!(
                    "unknown key '{key}' in [{section_name}]; expected one of {}",
                    known_keys(&section_name).join(", ")
                ),
            ));
            continue;
        }
        if let Some((first_line, _)) =
            entries.insert((section_name.clone(), key.clone()), (lineno, value))
        {
            issues.push(issue(
                Some(lineno),
                format!("duplicate key '{key}' in [{section_name}] (lines {first_line} and {lineno})"),
            ));
        }
    }
    RawConfig { entries }
}

/// Parse and validate a configuration. On failure, every detected problem
/// is returned, not just the first.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, Vec<ConfigIssue>> {
    let mut issues = Vec::new();
    let raw = tokenize(text, &mut issues);
    let mut sources = Vec::new();

    // condensate: internal triple or SI pair (exactly one of the two)
    let internal: Vec<&str> = ["m", "g", "rho"]
        .iter()
        .filter(|k| raw.get("condensate", k).is_some())
        .cloned()
        .collect();
    let si_pair: Vec<&str> = ["c_s_si", "xi_si"]
        .iter()
        .filter(|k| raw.get("condensate", k).is_some())
        .cloned()
        .collect();
    let condensate = match (internal.len(), si_pair.len()) {
        (0, 0) => {
            issues.push(issue(
                None,
                "[condensate] requires either m, g, rho or the SI pair c_s_si, xi_si",
            ));
            None
        }
        (_, 0) if internal.len() < 3 => {
            issues.push(issue(
                None,
                format!("[condensate] internal form needs m, g and rho; got only {internal:?}"),
            ));
            None
        }
        (0, _) if si_pair.len() < 2 => {
            issues.push(issue(
                None,
                format!("[condensate] SI form needs both c_s_si and xi_si; got only {si_pair:?}"),
            ));
            None
        }
        (3, 0) => {
            let m = raw.number("condensate", "m", &mut issues);
            let g = raw.number("condensate", "g", &mut issues);
            let rho = raw.number("condensate", "rho", &mut issues);
            for k in ["m", "g", "rho"] {
                sources.push((format!("condensate.{k}"), "config".to_string()));
            }
            match (m, g, rho) {
                (Some(m), Some(g), Some(rho)) => Some(CondensateSection::Internal { m, g, rho }),
                _ => None,
            }
        }
        (0, 2) => {
            let c_s = raw.number("condensate", "c_s_si", &mut issues);
            let xi = raw.number("condensate", "xi_si", &mut issues);
            for k in ["c_s_si", "xi_si"] {
                sources.push((format!("condensate.{k}"), "config".to_string()));
            }
            match (c_s, xi) {
                (Some(c_s), Some(xi)) => Some(CondensateSection::Si { c_s, xi }),
                _ => None,
            }
        }
        _ => {
            issues.push(issue(
                None,
                "[condensate] mixes the internal (m, g, rho) and SI (c_s_si, xi_si) forms; give exactly one",
            ));
            None
        }
    };
    if let Some(CondensateSection::Si { c_s, xi }) = condensate {
        if !(c_s > 0.0) || !(xi > 0.0) {
            issues.push(issue(None, "[condensate] c_s_si and xi_si must be positive"));
        }
    }

    // drive
    let mut drive = None;
    {
        let mut missing = Vec::new();
        for k in ["Omega1", "Omega2", "Delta", "delta_Hz"] {
            if raw.get("drive", k).is_none() {
                missing.push(k);
            } else {
                sources.push((format!("drive.{k}"), "config".to_string()));
            }
        }
        if !missing.is_empty() {
            issues.push(issue(None, format!("[drive] missing required keys: {}", missing.join(", "))));
        } else {
            let omega1 = raw.number("drive", "Omega1", &mut issues);
            let omega2 = raw.number("drive", "Omega2", &mut issues);
            let big = raw.number("drive", "Delta", &mut issues);
            let delta = raw.number("drive", "delta_Hz", &mut issues);
            let kappa = if raw.get("drive", "kappa").is_some() {
                sources.push(("drive.kappa".to_string(), "config".to_string()));
                raw.number("drive", "kappa", &mut issues)
            } else {
                sources.push(("drive.kappa".to_string(), "default: mode-matched to delta_Hz".to_string()));
                None
            };
            if let (Some(o1), Some(o2), Some(b), Some(d)) = (omega1, omega2, big, delta) {
                if !(o1 > 0.0) || !(o2 > 0.0) {
                    let line = raw.get("drive", "Omega1").map(|(l, _)| *l);
                    issues.push(issue(line, "[drive] Omega1 and Omega2 must be positive"));
                }
                if !(b > 0.0) {
                    let line = raw.get("drive", "Delta").map(|(l, _)| *l);
                    issues.push(issue(line, "[drive] Delta must be positive"));
                }
                if !(d > 0.0) {
                    // The condensate is unaffected by the beams only for a
                    // positive two-photon detuning; the scheme always
                    // addresses a phonon mode at delta > 0.
                    let line = raw.get("drive", "delta_Hz").map(|(l, _)| *l);
                    issues.push(issue(line, "[drive] delta_Hz must be > 0 to address a phonon mode"));
                } else if o1 > 0.0 && o2 > 0.0 && b > 0.0 {
                    drive = Some(DriveSection {
                        omega1_hz: o1,
                        omega2_hz: o2,
                        delta_big_hz: b,
                        delta_hz: d,
                        kappa,
                    });
                }
            }
        }
    }

    // pulse (all defaults allowed)
    let shape = match raw.get("pulse", "shape") {
        Some((line, value)) => {
            sources.push(("pulse.shape".to_string(), "config".to_string()));
            match value.parse::<EnvelopeShape>() {
                Ok(s) => s,
                Err(e) => {
                    issues.push(issue(Some(*line), format!("[pulse] {e}")));
                    EnvelopeShape::Rectangular
                }
            }
        }
        None => {
            sources.push(("pulse.shape".to_string(), "default".to_string()));
            EnvelopeShape::Rectangular
        }
    };
    let duration = match raw.get("pulse", "T") {
        Some((line, value)) => {
            sources.push(("pulse.T".to_string(), "config".to_string()));
            if value == "auto-pi" {
                PulseDuration::AutoPi
            } else {
                match value.parse::<f64>() {
                    Ok(t) if t > 0.0 && t.is_finite() => PulseDuration::Seconds(t),
                    _ => {
                        issues.push(issue(
                            Some(*line),
                            format!("[pulse] T: expected a positive duration in seconds or 'auto-pi', got '{value}'"),
                        ));
                        PulseDuration::AutoPi
                    }
                }
            }
        }
        None => {
            sources.push(("pulse.T".to_string(), "default: auto-pi".to_string()));
            PulseDuration::AutoPi
        }
    };

    // scan (optional as a whole; all three keys required when present)
    let scan_present = known_keys("scan").iter().any(|k| raw.get("scan", k).is_some());
    let scan = if scan_present {
        let parameter = match raw.get("scan", "parameter") {
            Some((line, value)) => match value.as_str() {
                "delta_offset_over_g" => Some(ScanParameter::DeltaOffsetOverG),
                "k_xi" | "kxi" => Some(ScanParameter::KXi),
                other => {
                    issues.push(issue(
                        Some(*line),
                        format!("[scan] unknown parameter '{other}'; expected delta_offset_over_g or k_xi"),
                    ));
                    None
                }
            },
            None => {
                issues.push(issue(None, "[scan] missing required key: parameter"));
                None
            }
        };
        let range = match raw.get("scan", "range") {
            Some((line, value)) => match value.split_once(':') {
                Some((lo, hi)) => match (lo.trim().parse::<f64>(), hi.trim().parse::<f64>()) {
                    (Ok(lo), Ok(hi)) if lo < hi => Some((lo, hi)),
                    _ => {
                        issues.push(issue(
                            Some(*line),
                            format!("[scan] range: expected 'min:max' with min < max, got '{value}'"),
                        ));
                        None
                    }
                },
                None => {
                    issues.push(issue(Some(*line), format!("[scan] range: expected 'min:max', got '{value}'")));
                    None
                }
            },
            None => {
                issues.push(issue(None, "[scan] missing required key: range"));
                None
            }
        };
        let points = match raw.get("scan", "points") {
            Some((line, value)) => match value.parse::<usize>() {
                Ok(n) if n >= 2 => Some(n),
                _ => {
                    issues.push(issue(
                        Some(*line),
                        format!("[scan] points: expected an integer >= 2, got '{value}'"),
                    ));
                    None
                }
            },
            None => {
                issues.push(issue(None, "[scan] missing required key: points"));
                None
            }
        };
        match (parameter, range, points) {
            (Some(parameter), Some((min, max)), Some(points)) => {
                sources.push(("scan".to_string(), "config".to_string()));
                Some(ScanSection { parameter, min, max, points })
            }
            _ => None,
        }
    } else {
        None
    };

    // output
    let directory = match raw.get("output", "directory") {
        Some((_, value)) => {
            sources.push(("output.directory".to_string(), "config".to_string()));
            value.clone()
        }
        None => {
            sources.push(("output.directory".to_string(), "default".to_string()));
            "out".to_string()
        }
    };
    let formats = match raw.get("output", "formats") {
        Some((line, value)) => {
            sources.push(("output.formats".to_string(), "config".to_string()));
            match value.as_str() {
                "csv" => Formats::Csv,
                "json" => Formats::Json,
                "both" => Formats::Both,
                other => {
                    issues.push(issue(
                        Some(*line),
                        format!("[output] formats: expected csv, json or both, got '{other}'"),
                    ));
                    Formats::Both
                }
            }
        }
        None => {
            sources.push(("output.formats".to_string(), "default".to_string()));
            Formats::Both
        }
    };

    if !issues.is_empty() {
        return Err(issues);
    }
    Ok(ScenarioConfig {
        condensate: condensate.expect("validated"),
        drive: drive.expect("validated"),
        pulse: PulseSection { shape, duration },
        scan,
        output: OutputSection { directory, formats },
        sources,
    })
}

/// Built-in defaults: a sound speed of 1 mm/s, a micrometer healing length,
/// beams at 10 MHz Rabi amplitude detuned by 10 THz, addressing a 100 Hz
/// phonon.
pub const DEFAULT_CONFIG: &str = "\
[condensate]
c_s_si = 1e-3
xi_si = 1e-6

[drive]
Omega1 = 1e7
Omega2 = 1e7
Delta = 1e13
delta_Hz = 100
";

/// A scenario with everything converted to internal ħ = 1 angular units.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub params: CondensateParams,
    pub si: SiConversion,
    pub drive: RamanDrive,
    /// Addressed phonon wavenumber (internal units); −κ of the drive.
    pub k: f64,
    pub pulse: PulseSection,
    pub scan: Option<ScanSection>,
    pub output: OutputSection,
    pub sources: Vec<(String, String)>,
}

// Solve dispersion(k) = delta for k > 0 by bisection (the dispersion is
// strictly increasing in k).
fn wavenumber_for(params: &CondensateParams, delta: f64) -> Result<f64, CoreError> {
    if !(delta > 0.0) {
        return Err(CoreError::Domain(format!("need delta > 0 to pick a mode, got {delta}")));
    }
    let mut hi = (2.0 * params.mass() * delta).sqrt().max(1e-12);
    while dispersion(params, hi) < delta {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dispersion(params, mid) < delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

impl ScenarioConfig {
    /// Convert to internal units and fill the derived mode selection.
    pub fn resolve(&self) -> Result<ResolvedScenario, CoreError> {
        let (params, si) = match self.condensate {
            CondensateSection::Internal { m, g, rho } => {
                (CondensateParams::new(m, g, rho)?, SiConversion::identity())
            }
            CondensateSection::Si { c_s, xi } => {
                // xi = 1 length unit and c_s = 1 velocity unit: the internal
                // background is m = g = rho = 1.
                let si = SiConversion::new(xi, xi / c_s)?;
                (CondensateParams::new(1.0, 1.0, 1.0)?, si)
            }
        };
        let delta_int = si.hz_to_angular(self.drive.delta_hz);
        let mut sources = self.sources.clone();
        let k = match self.drive.kappa {
            Some(kappa) => -kappa,
            None => {
                let k = wavenumber_for(&params, delta_int)?;
                sources.push((
                    "mode.k".to_string(),
                    format!("derived: omega(k) = 2*pi*delta_Hz, k = {k:.6e}"),
                ));
                k
            }
        };
        let drive = RamanDrive::new(
            Complex64::new(si.hz_to_angular(self.drive.omega1_hz), 0.0),
            Complex64::new(si.hz_to_angular(self.drive.omega2_hz), 0.0),
            si.hz_to_angular(self.drive.delta_big_hz),
            delta_int,
            -k,
        )?;
        Ok(ResolvedScenario {
            params,
            si,
            drive,
            k,
            pulse: self.pulse,
            scan: self.scan,
            output: self.output.clone(),
            sources,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_applies_defaults() {
        let cfg = parse_config(DEFAULT_CONFIG).unwrap();
        assert_eq!(cfg.pulse.shape, EnvelopeShape::Rectangular);
        assert_eq!(cfg.pulse.duration, PulseDuration::AutoPi);
        assert_eq!(cfg.output.directory, "out");
        assert_eq!(cfg.output.formats, Formats::Both);
        assert!(cfg.scan.is_none());
        assert!(cfg
            .sources
            .iter()
            .any(|(k, v)| k == "pulse.T" && v.starts_with("default")));
    }

    #[test]
    fn negative_delta_rejected() {
        let text = DEFAULT_CONFIG.replace("delta_Hz = 100", "delta_Hz = -5");
        let issues = parse_config(&text).unwrap_err();
        assert!(issues.iter().any(|i| i.message.contains("delta_Hz must be > 0")));
    }

    #[test]
    fn duplicate_key_names_both_lines() {
        let text = format!("{DEFAULT_CONFIG}delta_Hz = 200\n");
        let issues = parse_config(&text).unwrap_err();
        let dup = issues
            .iter()
            .find(|i| i.message.contains("duplicate key 'delta_Hz'"))
            .expect("duplicate reported");
        assert!(dup.message.contains("lines 9 and 10"), "{}", dup.message);
    }

    #[test]
    fn all_violations_reported_together() {
        let text = "\
[condensate]
c_s_si = 1e-3

[drive]
Omega1 = 1e7
delta_Hz = -1
bogus = 3
";
        let issues = parse_config(text).unwrap_err();
        let text_of = |needle: &str| issues.iter().any(|i| i.message.contains(needle));
        assert!(text_of("SI form needs both"), "{issues:?}");
        assert!(text_of("unknown key 'bogus'"), "{issues:?}");
        assert!(text_of("missing required keys"), "{issues:?}");
        assert!(issues.len() >= 3);
    }

    #[test]
    fn unknown_section_rejected() {
        let text = format!("{DEFAULT_CONFIG}\n[quux]\nx = 1\n");
        let issues = parse_config(&text).unwrap_err();
        assert!(issues.iter().any(|i| i.message.contains("unknown section [quux]")));
    }

    #[test]
    fn mixing_condensate_forms_rejected() {
        let text = DEFAULT_CONFIG.replace("c_s_si = 1e-3", "c_s_si = 1e-3\nm = 1");
        let issues = parse_config(&text).unwrap_err();
        assert!(issues.iter().any(|i| i.message.contains("mixes the internal")));
    }

    #[test]
    fn resolution_picks_mode_matched_wavenumber() {
        let cfg = parse_config(DEFAULT_CONFIG).unwrap();
        let resolved = cfg.resolve().unwrap();
        // omega(k) = 2 pi * 100 Hz * (xi/c_s) internal
        let delta_int = resolved.si.hz_to_angular(100.0);
        let omega = dispersion(&resolved.params, resolved.k);
        assert!((omega - delta_int).abs() < 1e-10 * delta_int);
        assert_eq!(resolved.drive.wavenumber_mismatch, -resolved.k);
        // frozen oracle for the default scenario
        assert!((resolved.k - 0.6016806661).abs() < 1e-9, "k = {}", resolved.k);
    }

    #[test]
    fn explicit_kappa_respected() {
        let text = DEFAULT_CONFIG.replace("delta_Hz = 100", "delta_Hz = 100\nkappa = -0.5");
        let resolved = parse_config(&text).unwrap().resolve().unwrap();
        assert_eq!(resolved.k, 0.5);
    }

    #[test]
    fn scan_section_parses() {
        let text = format!(
            "{DEFAULT_CONFIG}\n[scan]\nparameter = delta_offset_over_g\nrange = -4:4\npoints = 11\n"
        );
        let cfg = parse_config(&text).unwrap();
        let scan = cfg.scan.unwrap();
        assert_eq!(scan.parameter, ScanParameter::DeltaOffsetOverG);
        assert_eq!(scan.points, 11);
        assert_eq!((scan.min, scan.max), (-4.0, 4.0));
    }

    #[test]
    fn syntax_error_carries_line_number() {
        let text = format!("{DEFAULT_CONFIG}\nnot a key value pair\n");
        let issues = parse_config(&text).unwrap_err();
        let syn = issues.iter().find(|i| i.message.contains("expected 'key = value'")).unwrap();
        assert_eq!(syn.line, Some(11));
    }
}
