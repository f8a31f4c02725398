//! Declarative network descriptions and their doubled-space state-space
//! form `ξ̇ = Āξ + Dξ_in` with `ξ = [a₁..a_N; a₁†..a_N†]`.

mod frame;
mod state_space;

pub use frame::{
    bogoliubov_frame, passive_frame, spec_from_state_space, squeeze_parameter, transform_spec,
    SymplecticMap,
};
pub use state_space::{build_state_space, check_physical_realizability, PrReport, StateSpace};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Markovian bath attached to one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    /// Damping rate γ.
    pub gamma: f64,
    /// Thermal occupancy n.
    #[serde(default)]
    pub n: f64,
    #[serde(default)]
    pub m_re: f64,
    #[serde(default)]
    pub m_im: f64,
}

impl BathSpec {
    pub fn vacuum(gamma: f64) -> Self {
        Self::thermal(gamma, 0.0)
    }

    pub fn thermal(gamma: f64, n: f64) -> Self {
        BathSpec {
            gamma,
            n,
            m_re: 0.0,
            m_im: 0.0,
        }
    }

    pub fn with_anomalous(mut self, m: Complex64) -> Self {
        self.m_re = m.re;
        self.m_im = m.im;
        self
    }

    /// Stationary correlator ⟨a_in a_in⟩ amplitude.
    pub fn anomalous(&self) -> Complex64 {
        Complex64::new(self.m_re, self.m_im)
    }

    /// |m| ≤ √(n(n+1)).
    pub fn is_physical(&self) -> bool {
        self.anomalous().norm() <= (self.n * (self.n + 1.0)).sqrt() * (1.0 + 1e-12) + 1e-15
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    /// `g a_i† a_j + h.c.`
    BeamSplitter,
    /// `G a_i† a_j† + h.c.`
    TwoModeSqueeze,
    /// `Δ a_i† a_i`, Δ real.
    Detuning,
    /// Degenerate parametric drive. Amplitude η adds `−η/2` to the
    /// drift coefficient of `a_i†` in `ȧ_i`; for real η the X quadrature
    /// then decays at `(γ+η)/2` and P at `(γ−η)/2`.
    DegenerateParametric,
}

impl CouplingKind {
    pub fn arity(self) -> usize {
        match self {
            CouplingKind::BeamSplitter | CouplingKind::TwoModeSqueeze => 2,
            CouplingKind::Detuning | CouplingKind::DegenerateParametric => 1,
        }
    }

    pub fn is_active(self) -> bool {
        matches!(
            self,
            CouplingKind::TwoModeSqueeze | CouplingKind::DegenerateParametric
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingTerm {
    pub kind: CouplingKind,
    pub amp_re: f64,
    #[serde(default)]
    pub amp_im: f64,
    pub modes: Vec<usize>,
}

impl CouplingTerm {
    pub fn new(kind: CouplingKind, amp: Complex64, modes: Vec<usize>) -> Self {
        CouplingTerm {
            kind,
            amp_re: amp.re,
            amp_im: amp.im,
            modes,
        }
    }

    pub fn amplitude(&self) -> Complex64 {
        Complex64::new(self.amp_re, self.amp_im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    /// Number of modes N.
    #[serde(rename = "modes")]
    pub n_modes: usize,
    pub baths: Vec<BathSpec>,
    #[serde(default)]
    pub couplings: Vec<CouplingTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl NetworkSpec {
    /// One mode per bath, no couplings.
    pub fn new(baths: Vec<BathSpec>) -> Self {
        NetworkSpec {
            n_modes: baths.len(),
            baths,
            couplings: Vec::new(),
            labels: None,
        }
    }

    pub fn with_term(mut self, kind: CouplingKind, amp: Complex64, modes: &[usize]) -> Self {
        self.couplings
            .push(CouplingTerm::new(kind, amp, modes.to_vec()));
        self
    }

    pub fn beam_splitter(self, i: usize, j: usize, g: Complex64) -> Self {
        self.with_term(CouplingKind::BeamSplitter, g, &[i, j])
    }

    pub fn two_mode_squeeze(self, i: usize, j: usize, g: Complex64) -> Self {
        self.with_term(CouplingKind::TwoModeSqueeze, g, &[i, j])
    }

    pub fn detuning(self, i: usize, delta: f64) -> Self {
        self.with_term(CouplingKind::Detuning, Complex64::new(delta, 0.0), &[i])
    }

    pub fn parametric(self, i: usize, eta: Complex64) -> Self {
        self.with_term(CouplingKind::DegenerateParametric, eta, &[i])
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        self.labels = Some(labels.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.baths.iter().map(|b| b.gamma).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: NetworkSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::InvalidSpec("network needs at least one mode".into()));
        }
        if self.baths.len() != self.n_modes {
            return Err(Error::InvalidSpec(format!(
                "expected one bath per mode ({}), found {}",
                self.n_modes,
                self.baths.len()
            )));
        }
        for (i, b) in self.baths.iter().enumerate() {
            if !(b.gamma > 0.0 && b.gamma.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "baths[{i}].gamma must be positive, got {}",
                    b.gamma
                )));
            }
            if !(b.n >= 0.0 && b.n.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "baths[{i}].n must be non-negative, got {}",
                    b.n
                )));
            }
            if !(b.m_re.is_finite() && b.m_im.is_finite()) {
                return Err(Error::InvalidSpec(format!("baths[{i}] anomalous moment not finite")));
            }
            if !b.is_physical() {
                log::warn!(
                    "baths[{i}]: |m| = {} exceeds sqrt(n(n+1)); accepted as engineered input",
                    b.anomalous().norm()
                );
            }
        }
        for (t, c) in self.couplings.iter().enumerate() {
            if c.modes.len() != c.kind.arity() {
                return Err(Error::InvalidSpec(format!(
                    "couplings[{t}] ({:?}) takes {} mode index(es), got {}",
                    c.kind,
                    c.kind.arity(),
                    c.modes.len()
                )));
            }
            if let Some(&bad) = c.modes.iter().find(|&&m| m >= self.n_modes) {
                return Err(Error::InvalidSpec(format!(
                    "couplings[{t}] mode index {bad} out of range (N = {})",
                    self.n_modes
                )));
            }
            if c.kind.arity() == 2 && c.modes[0] == c.modes[1] {
                return Err(Error::InvalidSpec(format!(
                    "couplings[{t}] needs two distinct modes"
                )));
            }
            if !(c.amp_re.is_finite() && c.amp_im.is_finite()) {
                return Err(Error::InvalidSpec(format!("couplings[{t}] amplitude not finite")));
            }
            if c.kind == CouplingKind::Detuning && c.amp_im != 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "couplings[{t}]: detuning must be real"
                )));
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != self.n_modes {
                return Err(Error::InvalidSpec(format!(
                    "expected {} labels, found {}",
                    self.n_modes,
                    labels.len()
                )));
            }
        }
        Ok(())
    }
}

/// True iff the network has no (non-zero) two-mode-squeeze or degenerate
/// parametric term.
pub fn is_passive(spec: &NetworkSpec) -> bool {
    !spec
        .couplings
        .iter()
        .any(|c| c.kind.is_active() && c.amplitude().norm() > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn json_roundtrip_and_field_names() {
        let spec = NetworkSpec::new(vec![BathSpec::vacuum(1.0), BathSpec::thermal(2.0, 0.5)])
            .beam_splitter(0, 1, Complex64::new(0.5, 0.1));
        let text = spec.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["modes"], 2);
        assert_eq!(v["baths"][1]["n"], 0.5);
        assert_eq!(v["couplings"][0]["kind"], "beam_splitter");
        assert_eq!(v["couplings"][0]["amp_im"], 0.1);
        assert_eq!(NetworkSpec::from_json(&text).unwrap(), spec);
    }

    #[test]
    fn minimal_json_defaults() {
        let spec = NetworkSpec::from_json(
            r#"{"modes": 1, "baths": [{"gamma": 1.0}], "couplings": []}"#,
        )
        .unwrap();
        assert_eq!(spec.baths[0], BathSpec::vacuum(1.0));
    }

    #[test]
    fn validation_errors() {
        let bad = [
            r#"{"modes": 2, "baths": [{"gamma": 1.0}]}"#,
            r#"{"modes": 1, "baths": [{"gamma": 0.0}]}"#,
            r#"{"modes": 2, "baths": [{"gamma": 1.0},{"gamma":1.0}], "couplings": [{"kind":"beam_splitter","amp_re":1,"modes":[0,0]}]}"#,
            r#"{"modes": 2, "baths": [{"gamma": 1.0},{"gamma":1.0}], "couplings": [{"kind":"detuning","amp_re":1,"modes":[0,1]}]}"#,
            r#"{"modes": 2, "baths": [{"gamma": 1.0},{"gamma":1.0}], "couplings": [{"kind":"beam_splitter","amp_re":1,"modes":[0,2]}]}"#,
            r#"{"modes": 1, "baths": [{"gamma": 1.0}], "couplings": [{"kind":"detuning","amp_re":1,"amp_im":1,"modes":[0]}]}"#,
            r#"{"modes": 1, "baths": [{"gamma": 1.0}], "couplings": [{"kind":"warp","amp_re":1,"modes":[0]}]}"#,
            r#"{"modes": 1, "baths": [{"gamma": 1.0]"#,
        ];
        for text in bad {
            assert!(
                matches!(NetworkSpec::from_json(text), Err(Error::InvalidSpec(_))),
                "{text}"
            );
        }
    }

    #[test]
    fn passivity() {
        let bs = NetworkSpec::new(vec![BathSpec::vacuum(1.0); 2]).beam_splitter(0, 1, c(0.5));
        assert!(is_passive(&bs));
        let sq = bs.clone().two_mode_squeeze(0, 1, c(0.3));
        assert!(!is_passive(&sq));
        let par = bs.parametric(0, c(0.2));
        assert!(!is_passive(&par));
    }

    #[test]
    fn physicality_bound() {
        assert!(BathSpec::thermal(1.0, 2.0)
            .with_anomalous(Complex64::new(6f64.sqrt(), 0.0))
            .is_physical());
        assert!(!BathSpec::vacuum(1.0)
            .with_anomalous(Complex64::new(0.1, 0.0))
            .is_physical());
    }
}
