use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::bits::input_label;

/// Per-(x, i) success probabilities of a code and their minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    n: usize,
    /// `success[x][i - 1]`.
    success: Vec<Vec<f64>>,
    p_min: f64,
}

impl EvaluationResult {
    /// Builds a result from a `2ⁿ × n` table, clamping every entry into `[0, 1]`.
    pub fn from_table(n: usize, mut success: Vec<Vec<f64>>) -> Self {
        assert_eq!(success.len(), 1 << n, "table must cover all inputs");
        let mut p_min = f64::INFINITY;
        for row in success.iter_mut() {
            assert_eq!(row.len(), n, "table must cover all indices");
            for v in row.iter_mut() {
                *v = v.clamp(0.0, 1.0);
                p_min = p_min.min(*v);
            }
        }
        Self { n, success, p_min }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    /// Probability that Bob's guess of bit `i` (1-based) is right on input `x`.
    pub fn success(&self, x: usize, i: usize) -> f64 {
        self.success[x][i - 1]
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.success
    }

    /// `(x label, i, probability)` in input-major order.
    pub fn rows(&self) -> impl Iterator<Item = (String, usize, f64)> + '_ {
        self.success
            .iter()
            .enumerate()
            .flat_map(move |(x, row)| row.iter().enumerate().map(move |(k, &p)| (input_label(x, self.n), k + 1, p)))
    }

    /// `max - min` over all entries.
    pub fn spread(&self) -> f64 {
        let max = self.success.iter().flatten().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        max - self.p_min
    }

    /// CSV with header `x,i,probability`, then a final `p_min,<value>` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,i,probability\n");
        for (x, i, p) in self.rows() {
            let _ = writeln!(out, "{x},{i},{p:.17}");
        }
        let _ = writeln!(out, "p_min,{:.17}", self.p_min);
        out
    }
}

#[derive(Serialize)]
struct Row {
    x: String,
    i: usize,
    probability: f64,
}

impl Serialize for EvaluationResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Doc {
            n: usize,
            p_min: f64,
            success: Vec<Row>,
        }
        Doc {
            n: self.n,
            p_min: self.p_min,
            success: self.rows().map(|(x, i, probability)| Row { x, i, probability }).collect(),
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_and_csv() {
        let r = EvaluationResult::from_table(1, vec![vec![0.75], vec![0.5]]);
        assert_eq!(r.p_min(), 0.5);
        assert_eq!(r.success(0, 1), 0.75);
        let csv = r.to_csv();
        assert!(csv.starts_with("x,i,probability\n0,1,0.75"));
        assert!(csv.trim_end().ends_with("p_min,0.50000000000000000"));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["success"][1]["x"], "1");
    }

    #[test]
    fn clamps_roundoff() {
        let r = EvaluationResult::from_table(1, vec![vec![1.0 + 1e-15], vec![-1e-16]]);
        assert_eq!(r.success(0, 1), 1.0);
        assert_eq!(r.p_min(), 0.0);
    }
}
