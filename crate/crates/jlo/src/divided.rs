//! Divided differences of the exponential, evaluated as the corner entry of
//! the exponential of the bidiagonal node matrix. The simplex integral of
//! `exp(-sum s_j c_j)` over the standard q-simplex equals the divided
//! difference of exp at the nodes `-c_j` (Hermite-Genocchi), so this is the
//! exact value of every heat-factor simplex integral, stable under node
//! clustering.

use std::collections::HashMap;

/// exp[x_0, .., x_q] for nonpositive nodes, by scaling and squaring of the
/// bidiagonal matrix with the nodes on the diagonal and ones above it.
pub fn exp_divided_difference(nodes: &[f64]) -> f64 {
    let n = nodes.len();
    assert!(n >= 1);
    if n == 1 {
        return nodes[0].exp();
    }
    // Scale so the spectral content is small, then square back.
    let max_abs = nodes.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let s = if max_abs > 0.5 {
        (max_abs / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 1.0 / 2f64.powi(s as i32);

    // Dense (q+1)x(q+1) upper-triangular storage.
    let dim = n;
    let mut z = vec![0.0f64; dim * dim];
    for i in 0..dim {
        z[i * dim + i] = nodes[i] * scale;
        if i + 1 < dim {
            z[i * dim + i + 1] = scale;
        }
    }
    // Taylor series for exp(Z); upper triangular, so products stay small.
    let mut result = vec![0.0f64; dim * dim];
    for i in 0..dim {
        result[i * dim + i] = 1.0;
    }
    let mut term = result.clone();
    for k in 1..100 {
        // term <- term * Z / k
        let mut next = vec![0.0f64; dim * dim];
        for i in 0..dim {
            for l in i..dim {
                let t = term[i * dim + l];
                if t == 0.0 {
                    continue;
                }
                for j in l..dim {
                    next[i * dim + j] += t * z[l * dim + j];
                }
            }
        }
        let inv_k = 1.0 / k as f64;
        let mut maxterm = 0.0f64;
        for v in next.iter_mut() {
            *v *= inv_k;
        }
        for (r, t) in result.iter_mut().zip(next.iter()) {
            *r += t;
            maxterm = maxterm.max(t.abs());
        }
        term = next;
        if maxterm < 1e-22 {
            break;
        }
    }
    // Square back s times.
    for _ in 0..s {
        let mut sq = vec![0.0f64; dim * dim];
        for i in 0..dim {
            for l in i..dim {
                let t = result[i * dim + l];
                if t == 0.0 {
                    continue;
                }
                for j in l..dim {
                    sq[i * dim + j] += t * result[l * dim + j];
                }
            }
        }
        result = sq;
    }
    result[dim - 1]
}

/// Memoized divided differences keyed by the node bit patterns.
#[derive(Default)]
pub struct DividedDifferenceTable {
    cache: HashMap<Vec<u64>, f64>,
}

impl DividedDifferenceTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, nodes: &[f64]) -> f64 {
        let key: Vec<u64> = nodes.iter().map(|x| x.to_bits()).collect();
        if let Some(&v) = self.cache.get(&key) {
            return v;
        }
        let v = exp_divided_difference(nodes);
        self.cache.insert(key, v);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coincident_nodes_give_derivative_values() {
        // exp[c, c] = e^c, exp[c, c, c] = e^c / 2.
        let c = -1.3;
        assert!((exp_divided_difference(&[c, c]) - c.exp()).abs() < 1e-14);
        assert!((exp_divided_difference(&[c, c, c]) - c.exp() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn two_distinct_nodes() {
        let (a, b): (f64, f64) = (-0.7, -2.9);
        let exact = (a.exp() - b.exp()) / (a - b);
        assert!((exp_divided_difference(&[a, b]) - exact).abs() < 1e-14);
    }

    #[test]
    fn continuity_under_node_merging() {
        let base = exp_divided_difference(&[-1.0, -1.0, -2.0]);
        let perturbed = exp_divided_difference(&[-1.0, -1.0 - 1e-9, -2.0]);
        assert!((base - perturbed).abs() < 1e-7);
    }

    #[test]
    fn matches_simplex_quadrature() {
        // integral over {s0+s1=1} of exp(-(s0 c0 + s1 c1)) ds1 by fine
        // midpoint quadrature.
        let (c0, c1): (f64, f64) = (0.8, 2.3);
        let n = 20000;
        let mut acc = 0.0;
        for i in 0..n {
            let s1 = (i as f64 + 0.5) / n as f64;
            acc += (-(1.0 - s1) * c0 - s1 * c1).exp();
        }
        acc /= n as f64;
        let dd = exp_divided_difference(&[-c0, -c1]);
        assert!((acc - dd).abs() < 1e-8, "{acc} vs {dd}");
    }

    #[test]
    fn large_negative_nodes_underflow_gracefully() {
        let v = exp_divided_difference(&[-1e5, -2e5, -1.5e5]);
        assert!(v >= 0.0 && v < 1e-300);
    }
}

#[cfg(test)]
mod more_tests {
    use super::*;

    /// Plain recursive divided differences; fine for well-separated nodes.
    fn recursive_dd(nodes: &[f64]) -> f64 {
        if nodes.len() == 1 {
            return nodes[0].exp();
        }
        let a = recursive_dd(&nodes[1..]);
        let b = recursive_dd(&nodes[..nodes.len() - 1]);
        (a - b) / (nodes[nodes.len() - 1] - nodes[0])
    }

    #[test]
    fn matches_recursion_on_separated_nodes() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let n = 2 + (next() * 3.0) as usize; // 2..=4 nodes
            let mut nodes: Vec<f64> = (0..n).map(|_| -4.0 * next()).collect();
            nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // keep them separated so the recursion is stable
            let mut ok = true;
            for w in nodes.windows(2) {
                if (w[1] - w[0]).abs() < 0.05 {
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            let fast = exp_divided_difference(&nodes);
            let slow = recursive_dd(&nodes);
            assert!(
                (fast - slow).abs() <= 1e-9 * (slow.abs() + 1.0),
                "nodes {:?}: {} vs {}",
                nodes,
                fast,
                slow
            );
        }
    }
}
