//! JSON model files.
//!
//! ```json
//! {
//!   "id": "sir",
//!   "time_unit": "day",
//!   "species": [{"name": "S", "min": 0, "max": 12, "init": 10}, ...],
//!   "reactions": [
//!     {"name": "infection", "reactants": {"S": 1, "I": 1}, "products": {"I": 2},
//!      "propensity": {"kind": "mass_action", "params": {"k": 0.3}}}
//!   ],
//!   "reversible_pairs": [[0, 1]]
//! }
//! ```
//!
//! Species are referenced by name everywhere; reaction indices in
//! `reversible_pairs` are 0-based. Errors carry a JSON pointer to the
//! offending value.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::network::{Reaction, ReactionNetwork, Species};
use crate::propensity::{NeuralRole, Propensity, Term, TermFn};
use crate::NetworkError;

fn err(pointer: &str, message: impl Into<String>) -> NetworkError {
    NetworkError::Schema { pointer: pointer.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Value, ptr: &str, key: &str) -> Result<&'a Value, NetworkError> {
    obj.get(key).ok_or_else(|| err(ptr, format!("missing field `{key}`")))
}

fn as_f64(v: &Value, ptr: &str) -> Result<f64, NetworkError> {
    v.as_f64().ok_or_else(|| err(ptr, "expected a number"))
}

fn as_i64(v: &Value, ptr: &str) -> Result<i64, NetworkError> {
    v.as_i64().ok_or_else(|| err(ptr, "expected an integer"))
}

fn as_str<'a>(v: &'a Value, ptr: &str) -> Result<&'a str, NetworkError> {
    v.as_str().ok_or_else(|| err(ptr, "expected a string"))
}

fn as_object<'a>(v: &'a Value, ptr: &str) -> Result<&'a Map<String, Value>, NetworkError> {
    v.as_object().ok_or_else(|| err(ptr, "expected an object"))
}

fn as_array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>, NetworkError> {
    v.as_array().ok_or_else(|| err(ptr, "expected an array"))
}

struct Names<'a>(&'a [String]);

impl Names<'_> {
    fn index(&self, name: &str, ptr: &str) -> Result<usize, NetworkError> {
        self.0
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| err(ptr, format!("unknown species `{name}`")))
    }

    fn species_ref(&self, params: &Value, ptr: &str, key: &str) -> Result<usize, NetworkError> {
        let p = format!("{ptr}/{key}");
        self.index(as_str(field(params, ptr, key)?, &p)?, &p)
    }

    fn counts(&self, v: &Value, ptr: &str) -> Result<Vec<u32>, NetworkError> {
        let mut out = vec![0u32; self.0.len()];
        for (name, c) in as_object(v, ptr)? {
            let p = format!("{ptr}/{name}");
            let n = self.index(name, &p)?;
            let c = c.as_u64().ok_or_else(|| err(&p, "expected a nonnegative integer"))?;
            out[n] = u32::try_from(c).map_err(|_| err(&p, "coefficient too large"))?;
        }
        Ok(out)
    }

    fn reals(&self, v: &Value, ptr: &str) -> Result<Vec<f64>, NetworkError> {
        let mut out = vec![0.0; self.0.len()];
        for (name, c) in as_object(v, ptr)? {
            let p = format!("{ptr}/{name}");
            out[self.index(name, &p)?] = as_f64(c, &p)?;
        }
        Ok(out)
    }

    fn to_map_f(&self, v: &[f64]) -> Value {
        Value::Object(
            self.0.iter().zip(v).filter(|(_, x)| **x != 0.0).map(|(n, x)| (n.clone(), json!(x))).collect(),
        )
    }

    fn to_map_u(&self, v: &[u32]) -> Value {
        Value::Object(
            self.0.iter().zip(v).filter(|(_, x)| **x != 0).map(|(n, x)| (n.clone(), json!(x))).collect(),
        )
    }
}

fn parse_propensity(v: &Value, ptr: &str, names: &Names) -> Result<Propensity, NetworkError> {
    let kind = as_str(field(v, ptr, "kind")?, &format!("{ptr}/kind"))?;
    let pp = format!("{ptr}/params");
    let params = field(v, ptr, "params")?;
    as_object(params, &pp)?;
    let num = |key: &str| -> Result<f64, NetworkError> {
        as_f64(field(params, &pp, key)?, &format!("{pp}/{key}"))
    };
    Ok(match kind {
        "mass_action" => Propensity::MassAction { k: num("k")? },
        "hyperbolic" => Propensity::Hyperbolic {
            k: num("k")?,
            theta: num("theta")?,
            substrate: names.species_ref(params, &pp, "substrate")?,
            cofactor: names.species_ref(params, &pp, "cofactor")?,
        },
        "michaelis_menten" => Propensity::MichaelisMenten {
            vmax: num("vmax")?,
            km: num("km")?,
            substrate: names.species_ref(params, &pp, "substrate")?,
        },
        "opinion_exp" => {
            let dir_ptr = format!("{pp}/direction");
            let up = match as_str(field(params, &pp, "direction")?, &dir_ptr)? {
                "up" => true,
                "down" => false,
                other => return Err(err(&dir_ptr, format!("expected `up` or `down`, got `{other}`"))),
            };
            Propensity::OpinionExp {
                k: num("k")?,
                l: num("L")?,
                target: names.species_ref(params, &pp, "target")?,
                up,
                a: names.reals(field(params, &pp, "a")?, &format!("{pp}/a"))?,
            }
        }
        "neural_tanh" => {
            let role_ptr = format!("{pp}/role");
            let role = match as_str(field(params, &pp, "role")?, &role_ptr)? {
                "activation" => NeuralRole::Activation,
                "decay" => NeuralRole::Decay,
                other => return Err(err(&role_ptr, format!("expected `activation` or `decay`, got `{other}`"))),
            };
            let opt = |key: &str| -> Result<f64, NetworkError> {
                match params.get(key) {
                    Some(v) => as_f64(v, &format!("{pp}/{key}")),
                    None => Ok(0.0),
                }
            };
            let weights = match params.get("weights") {
                Some(w) => names.reals(w, &format!("{pp}/weights"))?,
                None => vec![0.0; names.0.len()],
            };
            Propensity::NeuralTanh {
                role,
                target: names.species_ref(params, &pp, "target")?,
                capacity: opt("capacity")?,
                weights,
                h: opt("h")?,
                gamma: opt("gamma")?,
            }
        }
        "tabulated" => {
            let tp = format!("{pp}/terms");
            let mut terms = Vec::new();
            for (i, t) in as_array(field(params, &pp, "terms")?, &tp)?.iter().enumerate() {
                let p = format!("{tp}/{i}");
                let coef = as_f64(field(t, &p, "coef")?, &format!("{p}/coef"))?;
                let powers = match t.get("powers") {
                    Some(v) => names.counts(v, &format!("{p}/powers"))?,
                    None => vec![0; names.0.len()],
                };
                let fp = format!("{p}/func");
                let func = match t.get("func") {
                    Some(f) => {
                        let s = as_str(f, &fp)?;
                        TermFn::from_name(s).ok_or_else(|| err(&fp, format!("unknown function `{s}`")))?
                    }
                    None => TermFn::One,
                };
                let (offset, weights) = match t.get("affine") {
                    Some(a) => {
                        let ap = format!("{p}/affine");
                        let c = match a.get("const") {
                            Some(c) => as_f64(c, &format!("{ap}/const"))?,
                            None => 0.0,
                        };
                        let w = match a.get("coeffs") {
                            Some(w) => names.reals(w, &format!("{ap}/coeffs"))?,
                            None => vec![0.0; names.0.len()],
                        };
                        (c, w)
                    }
                    None => (0.0, vec![0.0; names.0.len()]),
                };
                terms.push(Term { coef, powers, func, offset, weights });
            }
            Propensity::Tabulated { terms }
        }
        other => return Err(err(&format!("{ptr}/kind"), format!("unknown propensity kind `{other}`"))),
    })
}

/// Builds and validates a network from a parsed JSON document.
pub fn network_from_value(doc: &Value) -> Result<ReactionNetwork, NetworkError> {
    let mut species = Vec::new();
    for (i, s) in as_array(field(doc, "", "species")?, "/species")?.iter().enumerate() {
        let p = format!("/species/{i}");
        let name = as_str(field(s, &p, "name")?, &format!("{p}/name"))?.to_string();
        let min = match s.get("min") {
            Some(v) => as_i64(v, &format!("{p}/min"))?,
            None => 0,
        };
        let max = as_i64(field(s, &p, "max")?, &format!("{p}/max"))?;
        let init = as_i64(field(s, &p, "init")?, &format!("{p}/init"))?;
        if species.iter().any(|o: &Species| o.name == name) {
            return Err(err(&format!("{p}/name"), format!("duplicate species `{name}`")));
        }
        species.push(Species { name, min, max, init });
    }
    let names_vec: Vec<String> = species.iter().map(|s| s.name.clone()).collect();
    let names = Names(&names_vec);

    let mut reactions = Vec::new();
    for (j, r) in as_array(field(doc, "", "reactions")?, "/reactions")?.iter().enumerate() {
        let p = format!("/reactions/{j}");
        let name = match r.get("name") {
            Some(v) => as_str(v, &format!("{p}/name"))?.to_string(),
            None => format!("R{}", j + 1),
        };
        let empty = json!({});
        let reactants = names.counts(r.get("reactants").unwrap_or(&empty), &format!("{p}/reactants"))?;
        let products = names.counts(r.get("products").unwrap_or(&empty), &format!("{p}/products"))?;
        let propensity = parse_propensity(field(r, &p, "propensity")?, &format!("{p}/propensity"), &names)?;
        reactions.push(Reaction { name, reactants, products, propensity });
    }

    let mut pairs = Vec::new();
    if let Some(v) = doc.get("reversible_pairs") {
        for (k, pair) in as_array(v, "/reversible_pairs")?.iter().enumerate() {
            let p = format!("/reversible_pairs/{k}");
            let arr = as_array(pair, &p)?;
            if arr.len() != 2 {
                return Err(err(&p, "expected a pair [forward, reverse]"));
            }
            let idx = |i: usize| -> Result<usize, NetworkError> {
                arr[i].as_u64().map(|v| v as usize).ok_or_else(|| err(&format!("{p}/{i}"), "expected a reaction index"))
            };
            pairs.push((idx(0)?, idx(1)?));
        }
    }

    let mut net = ReactionNetwork::new(species, reactions, pairs)?;
    if let Some(id) = doc.get("id") {
        net = net.with_id(as_str(id, "/id")?);
    }
    if let Some(u) = doc.get("time_unit") {
        net = net.with_time_unit(as_str(u, "/time_unit")?);
    }
    Ok(net)
}

pub fn network_from_str(s: &str) -> Result<ReactionNetwork, NetworkError> {
    network_from_value(&serde_json::from_str(s)?)
}

pub fn load_network(path: impl AsRef<Path>) -> Result<ReactionNetwork, NetworkError> {
    network_from_str(&std::fs::read_to_string(path)?)
}

fn propensity_to_value(p: &Propensity, names: &Names) -> Value {
    let n = |i: usize| json!(names.0[i]);
    let params = match p {
        Propensity::MassAction { k } => json!({ "k": k }),
        Propensity::Hyperbolic { k, theta, substrate, cofactor } => {
            json!({ "k": k, "theta": theta, "substrate": n(*substrate), "cofactor": n(*cofactor) })
        }
        Propensity::MichaelisMenten { vmax, km, substrate } => {
            json!({ "vmax": vmax, "km": km, "substrate": n(*substrate) })
        }
        Propensity::OpinionExp { k, l, target, up, a } => json!({
            "k": k, "L": l, "target": n(*target),
            "direction": if *up { "up" } else { "down" },
            "a": names.to_map_f(a),
        }),
        Propensity::NeuralTanh { role, target, capacity, weights, h, gamma } => json!({
            "role": match role { NeuralRole::Activation => "activation", NeuralRole::Decay => "decay" },
            "target": n(*target), "capacity": capacity, "weights": names.to_map_f(weights),
            "h": h, "gamma": gamma,
        }),
        Propensity::Tabulated { terms } => json!({
            "terms": terms.iter().map(|t| json!({
                "coef": t.coef,
                "powers": names.to_map_u(&t.powers),
                "func": t.func.name(),
                "affine": { "const": t.offset, "coeffs": names.to_map_f(&t.weights) },
            })).collect::<Vec<_>>()
        }),
    };
    json!({ "kind": p.kind_name(), "params": params })
}

/// Serializes a network to the JSON schema (keys sorted).
pub fn network_to_value(net: &ReactionNetwork) -> Value {
    let names_vec: Vec<String> = net.species().iter().map(|s| s.name.clone()).collect();
    let names = Names(&names_vec);
    json!({
        "id": net.id(),
        "time_unit": net.time_unit(),
        "species": net.species().iter().map(|s| json!({
            "name": s.name, "min": s.min, "max": s.max, "init": s.init,
        })).collect::<Vec<_>>(),
        "reactions": net.reactions().iter().map(|r| json!({
            "name": r.name,
            "reactants": names.to_map_u(&r.reactants),
            "products": names.to_map_u(&r.products),
            "propensity": propensity_to_value(&r.propensity, &names),
        })).collect::<Vec<_>>(),
        "reversible_pairs": net.reversible_pairs().iter().map(|(f, b)| json!([f, b])).collect::<Vec<_>>(),
    })
}

pub fn network_to_string(net: &ReactionNetwork) -> String {
    serde_json::to_string_pretty(&network_to_value(net)).expect("JSON values always serialize")
}

pub fn save_network(net: &ReactionNetwork, path: impl AsRef<Path>) -> Result<(), NetworkError> {
    std::fs::write(path, network_to_string(net) + "\n")?;
    Ok(())
}
