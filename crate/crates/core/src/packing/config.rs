use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

/// Every knob of the packing pipeline. The Greek-letter parameters keep their
/// usual meaning; the remaining fields are desk-scale controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub alpha: f64,
    pub nu: f64,
    pub max_degree: usize,
    pub xi: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub d: f64,
    /// Multiplicity scale of the reduced multigraph.
    pub t: usize,
    /// Per hub vertex cap on connector images.
    pub m: usize,
    /// Number of parts requested from the regularity partition.
    pub r: usize,
    pub q: usize,
    pub zeta: f64,
    pub seed: u64,
    /// Tree piece size; `None` means `⌈n_• / M^{1/3}⌉`.
    pub piece_size: Option<usize>,
    /// Absolute slot-class tolerance in vertices; `None` means `ε n_•`.
    pub slot_tolerance: Option<f64>,
    pub hub_fraction: Option<f64>,
    pub density_slack: f64,
    /// Pick the least-used hub candidate instead of a uniform one.
    pub min_usage_tiebreak: bool,
    /// Attempts per batch in the bulk embedding.
    pub batch_retries: usize,
    /// Candidate images tried per piece root before giving up on a tree.
    pub connector_retries: usize,
    pub kappa_override: Option<usize>,
    /// Free neighbours in `W′` a child image needs; `None` means `M²`, or the
    /// desk substitute when `M²` exceeds half a hub slot.
    pub child_threshold: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            nu: 0.3,
            max_degree: 3,
            xi: 0.1,
            eta: 0.01,
            epsilon: 0.05,
            d: 0.3,
            t: 8,
            m: 20,
            r: 6,
            q: 8,
            zeta: 0.1,
            seed: 0,
            piece_size: None,
            slot_tolerance: None,
            hub_fraction: None,
            density_slack: 0.0,
            min_usage_tiebreak: false,
            batch_retries: 8,
            connector_retries: 6,
            kappa_override: None,
            child_threshold: None,
        }
    }
}

/// Outcome of [`PipelineConfig::validate`]: derived thresholds plus a log of
/// every substitution and warning.
#[derive(Debug, Clone, PartialEq)]
pub struct Validated {
    /// Neighbours a child image needs inside `W′`.
    pub child_threshold: usize,
    pub notes: Vec<String>,
}

impl PipelineConfig {
    /// Hard errors for meaningless values; warnings when the hierarchy
    /// `η < ε < ξ < 1/t < min(ν, α)` is violated. `hub_side` is the size of
    /// one hub slot, against which `M²` is compared.
    pub fn validate(&self, hub_side: usize) -> Result<Validated> {
        let unit = |name: &str, x: f64| -> Result<()> {
            if x > 0.0 && x <= 1.0 {
                Ok(())
            } else {
                param(format!("{name} = {x} must lie in (0, 1]"))
            }
        };
        unit("alpha", self.alpha)?;
        unit("nu", self.nu)?;
        unit("xi", self.xi)?;
        unit("eta", self.eta)?;
        unit("epsilon", self.epsilon)?;
        unit("d", self.d)?;
        if self.zeta <= 0.0 || self.zeta >= 1.0 / 3.0 {
            return param(format!("zeta = {} must lie in (0, 1/3)", self.zeta));
        }
        if self.max_degree < 2 {
            return param("max_degree must be at least 2");
        }
        if self.t == 0 || self.m == 0 || self.r == 0 {
            return param("t, M and r must be positive");
        }
        if self.q < self.max_degree {
            return param(format!("q = {} must be at least max_degree = {}", self.q, self.max_degree));
        }
        if self.piece_size == Some(0) {
            return param("piece_size must be positive");
        }
        let mut notes = Vec::new();
        let chain = [
            ("eta", self.eta),
            ("epsilon", self.epsilon),
            ("xi", self.xi),
            ("1/t", 1.0 / self.t as f64),
            ("min(nu, alpha)", self.nu.min(self.alpha)),
        ];
        for w in chain.windows(2) {
            if w[0].1 >= w[1].1 {
                notes.push(format!("hierarchy: {} = {} is not below {} = {}", w[0].0, w[0].1, w[1].0, w[1].1));
            }
        }
        let m_squared = self.m * self.m;
        let child_threshold = if let Some(c) = self.child_threshold {
            c
        } else if 2 * m_squared > hub_side {
            let sub = (2 * self.max_degree).max(self.max_degree * self.max_degree);
            notes.push(format!(
                "child threshold M^2 = {m_squared} exceeds half a hub slot ({hub_side}); using {sub}"
            ));
            sub
        } else {
            m_squared
        };
        for n in &notes {
            log::warn!("{n}");
        }
        Ok(Validated { child_threshold, notes })
    }

    /// Piece size for the tree partition given the bulk slot size.
    pub fn piece_size_for(&self, n_bullet: usize) -> usize {
        self.piece_size
            .unwrap_or_else(|| ((n_bullet as f64) / (self.m as f64).cbrt()).ceil().max(1.0) as usize)
    }

    /// Desk bound `Δ M k` on the hub degree after `k` rounds.
    pub fn hub_degree_bound(&self, rounds: usize) -> usize {
        self.max_degree * self.m * rounds
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_with_substitution() {
        let cfg = PipelineConfig::default();
        let v = cfg.validate(30).unwrap();
        assert_eq!(v.child_threshold, 9);
        assert!(v.notes.iter().any(|n| n.contains("M^2")));
        assert_eq!(cfg.piece_size_for(150), 56);
    }

    #[test]
    fn rejects_nonsense() {
        let bad = PipelineConfig {
            epsilon: 0.0,
            ..Default::default()
        };
        assert!(bad.validate(30).is_err());
        let bad = PipelineConfig {
            q: 2,
            ..Default::default()
        };
        assert!(bad.validate(30).is_err());
    }
}
