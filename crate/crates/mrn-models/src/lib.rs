//! Built-in models.
//!
//! | id                | presets                                 | time unit |
//! |-------------------|-----------------------------------------|-----------|
//! | `autocatalator`   | –                                       | s         |
//! | `pharmacokinetic` | –                                       | min       |
//! | `sir`             | –                                       | day       |
//! | `opinion`         | `liberal` (default), `totalitarian`     | day       |
//! | `transcription`   | –                                       | s         |
//! | `neural`          | `asynchronous` (default), `synchronous` | ms        |
//!
//! Models are referenced on the command line as `id` or `id:preset`.

use mrn_network::{NetworkError, Propensity, Reaction, ReactionNetwork, Species};
use thiserror::Error;

pub mod neural;
pub mod opinion;
pub mod transcription;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("model `{model}` has no preset `{preset}` (available: {available})")]
    UnknownPreset { model: String, preset: String, available: String },
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub presets: &'static [&'static str],
    pub description: &'static str,
}

pub fn catalog() -> &'static [CatalogEntry] {
    &[
        CatalogEntry {
            id: "autocatalator",
            presets: &[],
            description: "quadratic autocatalator with positive feedback (illustrative rate constants)",
        },
        CatalogEntry {
            id: "pharmacokinetic",
            presets: &[],
            description: "five-compartment solvent model with saturable liver clearance (illustrative constants)",
        },
        CatalogEntry { id: "sir", presets: &[], description: "SIR epidemic, 12 individuals (illustrative constants)" },
        CatalogEntry {
            id: "opinion",
            presets: &["liberal", "totalitarian"],
            description: "public/private opinion formation, 80 individuals",
        },
        CatalogEntry {
            id: "transcription",
            presets: &[],
            description: "transcription regulation with fast protein dimerization",
        },
        CatalogEntry {
            id: "neural",
            presets: &["asynchronous", "synchronous"],
            description: "excitatory/inhibitory stochastic neural population, 100 neurons",
        },
    ]
}

/// Splits `id[:preset]`.
pub fn parse_model_ref(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((id, preset)) => (id, Some(preset)),
        None => (s, None),
    }
}

/// Canonical parameterization of a catalog model.
pub fn builtin_model(id: &str, preset: Option<&str>) -> Result<ReactionNetwork, ModelError> {
    let entry = catalog().iter().find(|e| e.id == id).ok_or_else(|| ModelError::UnknownModel(id.to_string()))?;
    let bad_preset = |p: &str| ModelError::UnknownPreset {
        model: id.to_string(),
        preset: p.to_string(),
        available: if entry.presets.is_empty() { "none".into() } else { entry.presets.join(", ") },
    };
    let preset_name = preset.filter(|p| !p.is_empty());
    if let Some(p) = preset_name {
        if !entry.presets.contains(&p) {
            return Err(bad_preset(p));
        }
    }
    let net = match id {
        "autocatalator" => autocatalator()?,
        "pharmacokinetic" => pharmacokinetic()?,
        "sir" => sir(0.3, 1.0)?,
        "opinion" => match preset_name.unwrap_or("liberal") {
            "liberal" => opinion::network(&opinion::OpinionParams::liberal())?,
            _ => opinion::network(&opinion::OpinionParams::totalitarian())?,
        },
        "transcription" => transcription::network()?,
        "neural" => match preset_name.unwrap_or("asynchronous") {
            "asynchronous" => neural::network(&neural::NeuralParams::asynchronous())?,
            _ => neural::network(&neural::NeuralParams::synchronous())?,
        },
        _ => unreachable!("catalog and dispatch agree"),
    };
    let full_id = match preset_name {
        Some(p) => format!("{id}:{p}"),
        None => id.to_string(),
    };
    Ok(net.with_id(full_id))
}

/// Resolves `id[:preset]`.
pub fn builtin_model_ref(s: &str) -> Result<ReactionNetwork, ModelError> {
    let (id, preset) = parse_model_ref(s);
    builtin_model(id, preset)
}

pub(crate) fn reaction(name: &str, reactants: &[u32], products: &[u32], propensity: Propensity) -> Reaction {
    Reaction { name: name.into(), reactants: reactants.to_vec(), products: products.to_vec(), propensity }
}

fn mass(k: f64) -> Propensity {
    Propensity::MassAction { k }
}

/// S → P, D + P → D + 2P, 2P → P + Q, P + Q → 2Q, P → ∅, Q → ∅ with species
/// ordered (S, P, D, Q).
pub fn autocatalator() -> Result<ReactionNetwork, NetworkError> {
    let species = vec![
        Species::new("S", 0, 50, 50),
        Species::new("P", 0, 120, 0),
        Species::new("D", 5, 5, 5),
        Species::new("Q", 0, 120, 0),
    ];
    let reactions = vec![
        reaction("conversion", &[1, 0, 0, 0], &[0, 1, 0, 0], mass(0.1)),
        reaction("feedback", &[0, 1, 1, 0], &[0, 2, 1, 0], mass(0.02)),
        reaction("autocatalysis_q", &[0, 2, 0, 0], &[0, 1, 0, 1], mass(0.005)),
        reaction("autocatalysis_pq", &[0, 1, 0, 1], &[0, 0, 0, 2], mass(0.005)),
        reaction("p_degradation", &[0, 1, 0, 0], &[0, 0, 0, 0], mass(0.1)),
        reaction("q_degradation", &[0, 0, 0, 1], &[0, 0, 0, 0], mass(0.1)),
    ];
    Ok(ReactionNetwork::new(species, reactions, vec![])?.with_time_unit("s"))
}

/// Lungs (X1) exchanging solvent with fat, poorly perfused, richly perfused
/// tissue and liver (X2..X5); constant injection and Michaelis–Menten
/// clearance in the liver.
pub fn pharmacokinetic() -> Result<ReactionNetwork, NetworkError> {
    let names = ["lungs", "fat", "poorly_perfused", "richly_perfused", "liver"];
    let species = names.iter().map(|n| Species::new(*n, 0, 60, 0)).collect();
    let e = |i: usize| {
        let mut v = [0u32; 5];
        v[i] = 1;
        v
    };
    let z = [0u32; 5];
    let reactions = vec![
        reaction("injection", &z, &e(0), mass(1.0)),
        reaction("lungs_to_fat", &e(0), &e(1), mass(0.2)),
        reaction("fat_to_lungs", &e(1), &e(0), mass(0.02)),
        reaction("lungs_to_poor", &e(0), &e(2), mass(0.3)),
        reaction("poor_to_lungs", &e(2), &e(0), mass(0.15)),
        reaction("lungs_to_rich", &e(0), &e(3), mass(0.4)),
        reaction("rich_to_lungs", &e(3), &e(0), mass(0.4)),
        reaction("lungs_to_liver", &e(0), &e(4), mass(0.3)),
        reaction("liver_to_lungs", &e(4), &e(0), mass(0.3)),
        reaction("clearance", &e(4), &z, Propensity::MichaelisMenten { vmax: 0.8, km: 5.0, substrate: 4 }),
    ];
    Ok(ReactionNetwork::new(species, reactions, vec![(1, 2), (3, 4), (5, 6), (7, 8)])?.with_time_unit("min"))
}

/// `S + I → 2I` (κ₁), `I → R` (κ₂) for 12 individuals starting from
/// `(10, 2, 0)`.
pub fn sir(k1: f64, k2: f64) -> Result<ReactionNetwork, NetworkError> {
    let species = vec![Species::new("S", 0, 12, 10), Species::new("I", 0, 12, 2), Species::new("R", 0, 12, 0)];
    let reactions = vec![
        reaction("infection", &[1, 1, 0], &[0, 2, 0], mass(k1)),
        reaction("recovery", &[0, 1, 0], &[0, 0, 1], mass(k2)),
    ];
    Ok(ReactionNetwork::new(species, reactions, vec![])?.with_time_unit("day"))
}
