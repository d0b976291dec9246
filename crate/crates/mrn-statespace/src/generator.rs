use mrn_network::ReactionNetwork;
use nalgebra::DMatrix;

use crate::space::{SpaceKind, StateSpace};
use crate::StateSpaceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    Population,
    Da,
}

/// What to do with transitions that leave the state space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// Fail on any outflow through the species bounds.
    Strict,
    /// Keep the outflow on the diagonal (mass leaves the space) and record it.
    #[default]
    Absorbing,
}

/// Sparse generator in compressed-column form: column `j` lists the rates
/// out of state `j` (off-diagonal) and the total exit rate (diagonal).
#[derive(Debug, Clone)]
pub struct Generator {
    kind: GeneratorKind,
    dim: usize,
    col_ptr: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
    outflow: Vec<f64>,
}

impl Generator {
    /// Builds a generator from `(row, col, rate)` triplets of off-diagonal
    /// rates; the diagonal is set so that every column sums to `−outflow`.
    pub fn from_rates(
        kind: GeneratorKind,
        dim: usize,
        mut triplets: Vec<(usize, usize, f64)>,
        outflow: Vec<f64>,
    ) -> Result<Self, StateSpaceError> {
        if outflow.len() != dim {
            return Err(StateSpaceError::InvalidArgument("outflow length mismatch".into()));
        }
        triplets.retain(|t| t.2 != 0.0);
        triplets.sort_by_key(|t| (t.1, t.0));
        let mut col_ptr = vec![0usize; dim + 1];
        let mut rows = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut diag = vec![0.0; dim];
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if r >= dim || c >= dim || r == c {
                return Err(StateSpaceError::InvalidArgument(format!("bad generator entry ({r}, {c})")));
            }
            if !v.is_finite() || v < 0.0 {
                return Err(StateSpaceError::NonFinite("generator rate"));
            }
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                vals.push(v);
                col_ptr[c + 1] += 1;
                last = Some((r, c));
            }
            diag[c] -= v;
        }
        for c in 0..dim {
            col_ptr[c + 1] += col_ptr[c];
            diag[c] -= outflow[c];
        }
        Ok(Generator { kind, dim, col_ptr, rows, vals, diag, outflow })
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len() + self.dim
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Rate of leaving the state space from each state.
    pub fn outflow(&self) -> &[f64] {
        &self.outflow
    }

    pub fn total_outflow_rate(&self) -> f64 {
        self.outflow.iter().sum()
    }

    /// Off-diagonal entries `(row, rate)` of column `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        self.rows[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[j];
        }
        self.column(j).find(|(r, _)| *r == i).map_or(0.0, |(_, v)| v)
    }

    /// `y = P x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for ((yj, xj), dj) in y.iter_mut().zip(x).zip(&self.diag) {
            *yj = dj * xj;
        }
        for j in 0..self.dim {
            let xj = x[j];
            if xj == 0.0 {
                continue;
            }
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                y[self.rows[k]] += self.vals[k] * xj;
            }
        }
    }

    pub fn column_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|j| self.diag[j] + self.column(j).map(|(_, v)| v).sum::<f64>()).collect()
    }

    /// Largest exit rate, `max_j |P_jj|`.
    pub fn max_exit_rate(&self) -> f64 {
        self.diag.iter().fold(0.0, |a, d| a.max(d.abs()))
    }

    /// Infinity norm `max_i Σ_j |P_ij|`.
    pub fn norm_inf(&self) -> f64 {
        let mut row = self.diag.iter().map(|d| d.abs()).collect::<Vec<_>>();
        for j in 0..self.dim {
            for (i, v) in self.column(j) {
                row[i] += v.abs();
            }
        }
        row.into_iter().fold(0.0, f64::max)
    }

    /// First entry above the diagonal, if any.
    pub fn upper_entry(&self) -> Option<(usize, usize)> {
        (0..self.dim).find_map(|j| self.column(j).find(|(i, _)| *i < j).map(|(i, _)| (i, j)))
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.upper_entry().is_none()
    }

    /// Maximum `|i − j|` over the off-diagonal entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.dim)
            .flat_map(|j| self.column(j).map(move |(i, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            m[(j, j)] = self.diag[j];
            for (i, v) in self.column(j) {
                m[(i, j)] += v;
            }
        }
        m
    }
}

/// Assembles the population generator (or the DA generator with
/// `α_m(z) = π_m(x₀ + S z)`) over an enumerated space.
pub fn build_generator(
    net: &ReactionNetwork,
    space: &StateSpace,
    truncation: Truncation,
) -> Result<Generator, StateSpaceError> {
    let k = space.len();
    let mut triplets = Vec::with_capacity(k * net.n_reactions());
    let mut outflow = vec![0.0; k];
    let kind = match space.kind() {
        SpaceKind::Population => GeneratorKind::Population,
        SpaceKind::Da { .. } => GeneratorKind::Da,
    };
    for j in 0..k {
        let x = space.population(j);
        for m in 0..net.n_reactions() {
            let rate = net.propensity(m, x);
            if !rate.is_finite() || rate < 0.0 {
                return Err(StateSpaceError::NonFinite("propensity"));
            }
            if rate == 0.0 {
                continue;
            }
            match space.successor(net, j, m) {
                // reactions with zero net change do not move probability
                Some(i) if i == j => {}
                Some(i) => triplets.push((i, j, rate)),
                None => {
                    let at_horizon = match space.kind() {
                        SpaceKind::Da { horizon } => space.state(j).iter().sum::<i64>() as u64 >= horizon,
                        SpaceKind::Population => false,
                    };
                    if truncation == Truncation::Strict && !at_horizon {
                        return Err(StateSpaceError::NotClosed { state: x.to_vec(), reaction: m });
                    }
                    outflow[j] += rate;
                }
            }
        }
    }
    let g = Generator::from_rates(kind, k, triplets, outflow)?;
    let leak = g.total_outflow_rate();
    if leak > 0.0 {
        log::debug!("generator over {k} states has truncation outflow (total rate {leak:.3e})");
    }
    Ok(g)
}
