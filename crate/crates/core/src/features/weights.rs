use crate::error::{Error, Result};

/// Dense parameter vector `lambda`, one finite entry per feature.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn zeros(len: usize) -> Self {
        WeightVector(vec![0.0; len])
    }

    pub fn from_vec(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!("weight {i} is not finite")));
        }
        Ok(WeightVector(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(WeightVector::from_vec(vec![1.0, f64::NAN]).is_err());
        assert_eq!(WeightVector::from_vec(vec![3.0, 4.0]).unwrap().norm_squared(), 25.0);
    }
}
