//! Space-time discrete l2(L2) errors and observed orders.

use std::fmt::Write as _;

use crate::geometry::Vec3;

/// Running sums of `dt * sum_i w_i (X_i - x_i)^2`, one per variable, in
/// insertion order.
#[derive(Debug, Clone, Default)]
pub struct ErrorAccumulator {
    names: Vec<String>,
    sums: Vec<f64>,
}

impl ErrorAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    fn slot(&mut self, name: &str) -> &mut f64 {
        let k = match self.names.iter().position(|n| n == name) {
            Some(k) => k,
            None => {
                self.names.push(name.to_string());
                self.sums.push(0.0);
                self.sums.len() - 1
            }
        };
        &mut self.sums[k]
    }

    pub fn add_scalar(&mut self, name: &str, dt: f64, weights: &[f64], computed: &[f64], exact: &[f64]) {
        let s: f64 = weights
            .iter()
            .zip(computed.iter().zip(exact))
            .map(|(w, (c, e))| w * (c - e) * (c - e))
            .sum();
        *self.slot(name) += dt * s;
    }

    pub fn add_vector(&mut self, name: &str, dt: f64, weights: &[f64], computed: &[Vec3], exact: &[Vec3]) {
        let s: f64 = weights
            .iter()
            .zip(computed.iter().zip(exact))
            .map(|(w, (c, e))| w * (c - e).norm_squared())
            .sum();
        *self.slot(name) += dt * s;
    }

    /// Pressure is defined up to a constant, so both fields are compared
    /// after removing their weighted means.
    pub fn add_mean_free(&mut self, name: &str, dt: f64, weights: &[f64], computed: &[f64], exact: &[f64]) {
        let wsum: f64 = weights.iter().sum();
        let mean = |f: &[f64]| weights.iter().zip(f).map(|(w, v)| w * v).sum::<f64>() / wsum;
        let (mc, me) = (mean(computed), mean(exact));
        let c: Vec<f64> = computed.iter().map(|v| v - mc).collect();
        let e: Vec<f64> = exact.iter().map(|v| v - me).collect();
        self.add_scalar(name, dt, weights, &c, &e);
    }

    /// `(name, E)` pairs.
    pub fn errors(&self) -> Vec<(String, f64)> {
        self.names.iter().cloned().zip(self.sums.iter().map(|s| s.sqrt())).collect()
    }

    pub fn error(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|k| self.sums[k].sqrt())
    }
}

/// `log(e_a / e_b) / log(h_a / h_b)`.
pub fn observed_order(e_a: f64, e_b: f64, h_a: f64, h_b: f64) -> f64 {
    (e_a / e_b).ln() / (h_a / h_b).ln()
}

/// Errors for a mesh sequence, one row per variable.
#[derive(Debug, Clone, Default)]
pub struct ErrorReport {
    pub meshes: Vec<String>,
    pub h: Vec<f64>,
    pub variables: Vec<String>,
    /// `errors[v][m]`
    pub errors: Vec<Vec<f64>>,
}

impl ErrorReport {
    pub fn new(variables: &[&str]) -> Self {
        ErrorReport {
            variables: variables.iter().map(|s| s.to_string()).collect(),
            errors: vec![Vec::new(); variables.len()],
            ..Default::default()
        }
    }

    /// Appends a mesh; variables missing from `acc` get NaN.
    pub fn push(&mut self, mesh: &str, h: f64, acc: &ErrorAccumulator) {
        self.meshes.push(mesh.to_string());
        self.h.push(h);
        for (v, name) in self.variables.iter().enumerate() {
            self.errors[v].push(acc.error(name).unwrap_or(f64::NAN));
        }
    }

    pub fn error(&self, variable: &str) -> Option<&[f64]> {
        let v = self.variables.iter().position(|n| n == variable)?;
        Some(&self.errors[v])
    }

    /// Pairwise orders between consecutive meshes.
    pub fn orders(&self, variable: &str) -> Option<Vec<f64>> {
        let e = self.error(variable)?;
        Some(
            (1..e.len())
                .map(|m| observed_order(e[m - 1], e[m], self.h[m - 1], self.h[m]))
                .collect(),
        )
    }

    /// CSV with header `mesh,variable,error,order`; the first mesh has an
    /// empty order column.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("mesh,variable,error,order\n");
        for (v, name) in self.variables.iter().enumerate() {
            let orders = self.orders(name).unwrap_or_default();
            for (m, mesh) in self.meshes.iter().enumerate() {
                let o = if m == 0 { String::new() } else { format!("{:.4}", orders[m - 1]) };
                let _ = writeln!(s, "{},{},{:.6e},{}", mesh, name, self.errors[v][m], o);
            }
        }
        s
    }
}
