use mrn_network::{Jet, ReactionNetwork};

/// Derivatives of every propensity `α_m(z) = π_m(x₀ + S z)` with respect to
/// the degrees of advancement, evaluated at one point.
///
/// Tensors are dense and symmetric: `second[m][a * M + b]`,
/// `third[m][(a * M + b) * M + c]`. Orders not requested are empty.
#[derive(Debug, Clone, PartialEq)]
pub struct PropensityDerivatives {
    pub n_reactions: usize,
    pub order: u8,
    pub value: Vec<f64>,
    pub first: Vec<Vec<f64>>,
    pub second: Vec<Vec<f64>>,
    pub third: Vec<Vec<f64>>,
}

/// Rows of the stoichiometric matrix as floats (`s_rows[n][m] = S_nm`).
pub(crate) fn stoich_rows(net: &ReactionNetwork) -> Vec<Vec<f64>> {
    (0..net.n_species()).map(|n| (0..net.n_reactions()).map(|m| net.stoich(m)[n] as f64).collect()).collect()
}

pub(crate) fn derivatives_with(
    net: &ReactionNetwork,
    x0: &[f64],
    s_rows: &[Vec<f64>],
    z: &[f64],
    order: u8,
) -> PropensityDerivatives {
    let xj: Vec<Jet> = x0.iter().zip(s_rows).map(|(c, row)| Jet::affine(order, *c, row, z)).collect();
    let jets = net.propensities_real(&xj);
    let m = z.len();
    PropensityDerivatives {
        n_reactions: net.n_reactions(),
        order,
        value: jets.iter().map(|j| j.v).collect(),
        first: jets.iter().map(|j| j.g.clone()).collect(),
        second: jets.iter().map(|j| symmetrize2(&j.h, m)).collect(),
        third: jets.iter().map(|j| symmetrize3(&j.t, m)).collect(),
    }
}

/// Jet products accumulate mixed partials in different orders; averaging
/// makes the tensors symmetric to the last bit.
fn symmetrize2(h: &[f64], m: usize) -> Vec<f64> {
    if h.is_empty() {
        return Vec::new();
    }
    let mut out = h.to_vec();
    for a in 0..m {
        for b in a + 1..m {
            let v = 0.5 * (h[a * m + b] + h[b * m + a]);
            out[a * m + b] = v;
            out[b * m + a] = v;
        }
    }
    out
}

fn symmetrize3(t: &[f64], m: usize) -> Vec<f64> {
    if t.is_empty() {
        return Vec::new();
    }
    let idx = |a: usize, b: usize, c: usize| (a * m + b) * m + c;
    let mut out = t.to_vec();
    for a in 0..m {
        for b in a..m {
            for c in b..m {
                let perms = [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)];
                let v = perms.iter().map(|&(i, j, k)| t[idx(i, j, k)]).sum::<f64>() / 6.0;
                for (i, j, k) in perms {
                    out[idx(i, j, k)] = v;
                }
            }
        }
    }
    out
}

/// Exact derivatives of order `1..=3` at the DA point `z`.
pub fn propensity_derivatives(net: &ReactionNetwork, z: &[f64], order: u8) -> PropensityDerivatives {
    assert_eq!(z.len(), net.n_reactions(), "one degree of advancement per reaction");
    let x0: Vec<f64> = net.x0().iter().map(|v| *v as f64).collect();
    derivatives_with(net, &x0, &stoich_rows(net), z, order.clamp(1, 3))
}
