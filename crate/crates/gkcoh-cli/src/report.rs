use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check_id: String,
    pub anchor: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(id: &str, anchor: &str, ok: bool, detail: impl Into<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { check_id: id.into(), anchor: anchor.into(), status, detail: detail.into() }
    }

    /// A check whose computation returned an error counts as a failure.
    pub fn from_result<T>(id: &str, anchor: &str, r: Result<T, gkcoh::error::Error>, f: impl FnOnce(T) -> (bool, String)) -> Self {
        match r {
            Ok(v) => {
                let (ok, d) = f(v);
                Check::new(id, anchor, ok, d)
            }
            Err(e) => Check::new(id, anchor, false, format!("error: {e}")),
        }
    }

    pub fn skip(id: &str, anchor: &str, detail: impl Into<String>) -> Self {
        Check { check_id: id.into(), anchor: anchor.into(), status: Status::Skip, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Omitted from JSON unless timing is requested, so equal seeds give equal bytes.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

impl SuiteReport {
    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("suite {}\n", self.suite);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            s += &format!("  [{tag}] {:<28} {:<40} {}\n", c.check_id, c.anchor, c.detail);
        }
        if let Some(t) = self.wall_time_ms {
            s += &format!("  wall time {t} ms\n");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodsJson {
    pub omega1: f64,
    pub omega2_im: f64,
    pub eta1: f64,
    pub eta2_im: f64,
    pub legendre_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistJson {
    pub d: i64,
    pub sign_pred: i32,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalityJson {
    pub name: String,
    pub raw: Option<f64>,
    pub detected: Option<Fraction>,
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub curve: String,
    pub conductor: u64,
    pub periods: PeriodsJson,
    pub twists: Vec<TwistJson>,
    pub reports: Vec<RationalityJson>,
}

impl CurveReport {
    pub fn all_detected(&self) -> bool {
        self.reports.iter().all(|r| r.detected.is_some())
    }

    pub fn render_text(&self) -> String {
        let p = &self.periods;
        let mut s = format!(
            "curve [{}]  N = {}\n  Omega1 = {:.15}  Omega2 = {:.15} i\n  eta1 = {:.15}  eta2 = {:.15} i\n  Legendre residual {:.3e}\n",
            self.curve, self.conductor, p.omega1, p.omega2_im, p.eta1, p.eta2_im, p.legendre_residual
        );
        for t in &self.twists {
            let l = t.l.map_or("n/a".to_string(), |l| format!("{l:.12}"));
            s += &format!("  twist d = {:>4}  predicted sign {:+}  L = {l}  {}\n", t.d, t.sign_pred, t.note);
        }
        for r in &self.reports {
            let det = match &r.detected {
                Some(f) => format!("{}/{}", f.num, f.den),
                None => "none".into(),
            };
            let raw = r.raw.map_or("n/a".to_string(), |v| format!("{v:.12}"));
            s += &format!("  report {:<4} raw = {raw}  detected {det}", r.name);
            if let Some(res) = r.residual {
                s += &format!("  residual {res:.3e}");
            }
            if let Some(e) = &r.error {
                s += &format!("  error: {e}");
            }
            s += "\n";
        }
        s
    }
}
