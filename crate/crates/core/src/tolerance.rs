use crate::error::{Error, Result};

/// Numerical tolerances used throughout the library.
///
/// Values are passed explicitly to every operation that needs them. Relative
/// tolerances are scaled by the norm of the matrix in question.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Hermiticity check, relative to the max-norm of the matrix.
    pub hermiticity: f64,
    /// Eigen-residual and orthonormality bound, relative to the matrix norm.
    pub spectral: f64,
    /// Eigenvalue clustering gap, relative to the matrix norm.
    pub cluster: f64,
    /// Unit-norm and Gram-matrix bound for states and subspaces.
    pub norm: f64,
    /// Canonical relation residual, relative to `||A|| ||B||`.
    pub ccr: f64,
    /// Distance from the canonical domain still treated as inside it.
    pub domain: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            hermiticity: 1e-12,
            spectral: 1e-10,
            cluster: 1e-8,
            norm: 1e-12,
            ccr: 1e-10,
            domain: 1e-8,
        }
    }
}

impl ToleranceConfig {
    /// Parses overrides of the form `key=value[,key=value...]` on top of the
    /// defaults. Keys are the field names.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("tolerance override '{item}' is not key=value")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("tolerance '{key}' has non-numeric value '{value}'")))?;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveValue(value));
            }
            let slot = match key.trim() {
                "hermiticity" => &mut self.hermiticity,
                "spectral" => &mut self.spectral,
                "cluster" => &mut self.cluster,
                "norm" => &mut self.norm,
                "ccr" => &mut self.ccr,
                "domain" => &mut self.domain,
                other => return Err(Error::InvalidInput(format!("unknown tolerance key '{other}'"))),
            };
            *slot = value;
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_replace_named_fields_only() {
        let tol = ToleranceConfig::default().with_overrides("ccr=1e-9, cluster=2e-7").unwrap();
        assert_eq!(tol.ccr, 1e-9);
        assert_eq!(tol.cluster, 2e-7);
        assert_eq!(tol.spectral, ToleranceConfig::default().spectral);
    }

    #[test]
    fn overrides_reject_garbage() {
        let base = ToleranceConfig::default();
        assert!(base.with_overrides("ccr").is_err());
        assert!(base.with_overrides("bogus=1").is_err());
        assert!(base.with_overrides("ccr=-1").is_err());
        assert!(base.with_overrides("").is_ok());
    }
}
