use crate::jet::Scalar;
use crate::propensity::{Convexity, Propensity};
use crate::NetworkError;

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            m.data[i * c..(i + 1) * c].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
}

/// `S = V′ − V`.
pub fn net_stoichiometry(v: &IntMatrix, v_prime: &IntMatrix) -> Result<IntMatrix, NetworkError> {
    if v.rows != v_prime.rows || v.cols != v_prime.cols {
        return Err(NetworkError::Shape(format!(
            "V is {}x{} but V' is {}x{}",
            v.rows, v.cols, v_prime.rows, v_prime.cols
        )));
    }
    let data = v_prime.data.iter().zip(&v.data).map(|(a, b)| a - b).collect();
    Ok(IntMatrix { rows: v.rows, cols: v.cols, data })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub name: String,
    pub min: i64,
    pub max: i64,
    pub init: i64,
}

impl Species {
    pub fn new(name: impl Into<String>, min: i64, max: i64, init: i64) -> Self {
        Species { name: name.into(), min, max, init }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reaction {
    pub name: String,
    /// ν_{·m}, one entry per species.
    pub reactants: Vec<u32>,
    /// ν′_{·m}, one entry per species.
    pub products: Vec<u32>,
    pub propensity: Propensity,
}

/// Outcome of a successful [`validate_network`] call.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub n_species: usize,
    pub n_reactions: usize,
    /// Reactions not covered by a reversible pair (relevant to thermodynamics).
    pub unpaired_reactions: Vec<usize>,
}

/// Checks every structural invariant and reports all violations at once.
pub fn validate_network(
    species: &[Species],
    reactions: &[Reaction],
    pairs: &[(usize, usize)],
) -> Result<ValidationReport, NetworkError> {
    let n = species.len();
    let m = reactions.len();
    let mut problems = Vec::new();
    if n == 0 {
        problems.push("network has no species".to_string());
    }
    if m == 0 {
        problems.push("network has no reactions".to_string());
    }
    for (i, s) in species.iter().enumerate() {
        if s.min > s.max {
            problems.push(format!("species {i} ({}): min {} > max {}", s.name, s.min, s.max));
        }
        if s.init < s.min || s.init > s.max {
            problems.push(format!("species {i} ({}): initial value {} outside [{}, {}]", s.name, s.init, s.min, s.max));
        }
    }
    for (j, r) in reactions.iter().enumerate() {
        if r.reactants.len() != n || r.products.len() != n {
            problems.push(format!("reaction {j} ({}): stoichiometry must have {n} entries", r.name));
            continue;
        }
        for msg in r.propensity.check(n) {
            problems.push(format!("reaction {j} ({}): {msg}", r.name));
        }
    }
    let mut seen = vec![false; m];
    for (k, &(f, b)) in pairs.iter().enumerate() {
        if f >= m || b >= m || f == b {
            problems.push(format!("reversible pair {k} ({f}, {b}) references invalid reactions"));
            continue;
        }
        for idx in [f, b] {
            if seen[idx] {
                problems.push(format!("reaction {idx} appears in more than one reversible pair"));
            }
            seen[idx] = true;
        }
        let (rf, rb) = (&reactions[f], &reactions[b]);
        if rf.reactants.len() == n && rb.reactants.len() == n {
            let mismatch = (0..n).any(|i| {
                let sf = rf.products[i] as i64 - rf.reactants[i] as i64;
                let sb = rb.products[i] as i64 - rb.reactants[i] as i64;
                sf != -sb
            });
            if mismatch {
                problems.push(format!("reversible pair {k}: net stoichiometry of reaction {b} is not the negative of reaction {f}"));
            }
        }
    }
    if !problems.is_empty() {
        return Err(NetworkError::Invalid(problems));
    }
    Ok(ValidationReport {
        n_species: n,
        n_reactions: m,
        unpaired_reactions: (0..m).filter(|i| !seen[*i]).collect(),
    })
}

/// A validated, immutable reaction network.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactionNetwork {
    id: String,
    time_unit: String,
    species: Vec<Species>,
    reactions: Vec<Reaction>,
    pairs: Vec<(usize, usize)>,
    stoich: Vec<Vec<i64>>,
}

impl ReactionNetwork {
    pub fn new(
        species: Vec<Species>,
        reactions: Vec<Reaction>,
        pairs: Vec<(usize, usize)>,
    ) -> Result<Self, NetworkError> {
        validate_network(&species, &reactions, &pairs)?;
        let stoich = reactions
            .iter()
            .map(|r| r.products.iter().zip(&r.reactants).map(|(p, q)| *p as i64 - *q as i64).collect())
            .collect();
        Ok(ReactionNetwork {
            id: String::new(),
            time_unit: "s".into(),
            species,
            reactions,
            pairs,
            stoich,
        })
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_time_unit(mut self, unit: impl Into<String>) -> Self {
        self.time_unit = unit.into();
        self
    }

    /// Replaces the initial state (validated against the bounds).
    pub fn with_initial_state(mut self, x0: &[i64]) -> Result<Self, NetworkError> {
        if x0.len() != self.species.len() {
            return Err(NetworkError::Shape(format!("initial state has {} entries", x0.len())));
        }
        for (s, &v) in self.species.iter_mut().zip(x0) {
            s.init = v;
        }
        validate_network(&self.species, &self.reactions, &self.pairs)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<ValidationReport, NetworkError> {
        validate_network(&self.species, &self.reactions, &self.pairs)
    }

    pub fn id(&self) -> &str {
        &self.id
    }
    pub fn time_unit(&self) -> &str {
        &self.time_unit
    }
    pub fn species(&self) -> &[Species] {
        &self.species
    }
    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }
    pub fn reversible_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
    pub fn n_species(&self) -> usize {
        self.species.len()
    }
    pub fn n_reactions(&self) -> usize {
        self.reactions.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    /// Net stoichiometric vector `s_{·m}`.
    #[inline]
    pub fn stoich(&self, m: usize) -> &[i64] {
        &self.stoich[m]
    }

    pub fn x0(&self) -> Vec<i64> {
        self.species.iter().map(|s| s.init).collect()
    }

    pub fn lower_bounds(&self) -> Vec<i64> {
        self.species.iter().map(|s| s.min).collect()
    }

    pub fn upper_bounds(&self) -> Vec<i64> {
        self.species.iter().map(|s| s.max).collect()
    }

    pub fn reactant_matrix(&self) -> IntMatrix {
        let mut v = IntMatrix::zeros(self.n_species(), self.n_reactions());
        for (m, r) in self.reactions.iter().enumerate() {
            for (n, &nu) in r.reactants.iter().enumerate() {
                v.set(n, m, nu as i64);
            }
        }
        v
    }

    pub fn product_matrix(&self) -> IntMatrix {
        let mut v = IntMatrix::zeros(self.n_species(), self.n_reactions());
        for (m, r) in self.reactions.iter().enumerate() {
            for (n, &nu) in r.products.iter().enumerate() {
                v.set(n, m, nu as i64);
            }
        }
        v
    }

    pub fn net_stoichiometry(&self) -> IntMatrix {
        net_stoichiometry(&self.reactant_matrix(), &self.product_matrix())
            .expect("shapes agree by construction")
    }

    pub fn in_bounds(&self, x: &[i64]) -> bool {
        x.iter().zip(&self.species).all(|(v, s)| *v >= s.min && *v <= s.max)
    }

    /// `π_m(x)` without bounds checking (hot path for samplers).
    #[inline]
    pub fn propensity(&self, m: usize, x: &[i64]) -> f64 {
        let r = &self.reactions[m];
        r.propensity.eval_count(x, &r.reactants)
    }

    /// All propensities at an in-bounds population state.
    pub fn eval_propensities(&self, x: &[i64]) -> Result<Vec<f64>, NetworkError> {
        if x.len() != self.n_species() {
            return Err(NetworkError::Shape(format!("state has {} entries, expected {}", x.len(), self.n_species())));
        }
        if !self.in_bounds(x) {
            return Err(NetworkError::OutOfBounds(x.to_vec()));
        }
        let out: Vec<f64> = (0..self.n_reactions()).map(|m| self.propensity(m, x)).collect();
        if let Some(m) = out.iter().position(|v| !v.is_finite()) {
            return Err(NetworkError::NonFinite { reaction: m, state: x.to_vec() });
        }
        Ok(out)
    }

    /// Smooth propensities on a real-valued (or jet-valued) population state.
    pub fn propensities_real<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        self.reactions.iter().map(|r| r.propensity.eval(x, &r.reactants)).collect()
    }

    /// `x = x₀ + S z`; fails when the result violates the species bounds.
    pub fn da_to_population(&self, z: &[u64]) -> Result<Vec<i64>, NetworkError> {
        if z.len() != self.n_reactions() {
            return Err(NetworkError::Shape(format!("DA vector has {} entries, expected {}", z.len(), self.n_reactions())));
        }
        let mut x = self.x0();
        for (m, &zm) in z.iter().enumerate() {
            if zm == 0 {
                continue;
            }
            for (xn, s) in x.iter_mut().zip(&self.stoich[m]) {
                *xn += s * zm as i64;
            }
        }
        if !self.in_bounds(&x) {
            return Err(NetworkError::ImpossibleDa { z: z.to_vec(), x });
        }
        Ok(x)
    }

    /// Real-valued counterpart of [`Self::da_to_population`] (no bounds check).
    pub fn da_to_population_real(&self, z: &[f64]) -> Vec<f64> {
        let mut x: Vec<f64> = self.species.iter().map(|s| s.init as f64).collect();
        for (m, &zm) in z.iter().enumerate() {
            if zm == 0.0 {
                continue;
            }
            for (xn, s) in x.iter_mut().zip(&self.stoich[m]) {
                *xn += *s as f64 * zm;
            }
        }
        x
    }

    /// Species read by the propensity of reaction `m`.
    pub fn referenced_species(&self, m: usize) -> Vec<usize> {
        let r = &self.reactions[m];
        r.propensity.referenced_species(&r.reactants)
    }

    /// For each reaction, the reactions whose propensity may change when it fires.
    pub fn dependency_graph(&self) -> Vec<Vec<usize>> {
        let reads: Vec<Vec<usize>> = (0..self.n_reactions()).map(|m| self.referenced_species(m)).collect();
        (0..self.n_reactions())
            .map(|m| {
                let changed: Vec<usize> = self.stoich[m].iter().enumerate().filter(|(_, s)| **s != 0).map(|(n, _)| n).collect();
                (0..self.n_reactions())
                    .filter(|k| reads[*k].iter().any(|n| changed.contains(n)))
                    .collect()
            })
            .collect()
    }

    pub fn convexity(&self, m: usize) -> Convexity {
        let r = &self.reactions[m];
        r.propensity.convexity(&r.reactants)
    }

    /// Index of the reverse partner of reaction `m`, if declared.
    pub fn reverse_of(&self, m: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(f, b)| {
            if f == m {
                Some(b)
            } else if b == m {
                Some(f)
            } else {
                None
            }
        })
    }
}
