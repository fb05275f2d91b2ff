use super::PfaffianError;

/// Perfect matching of `{0, …, 2n−1}` in normalized form: each pair is
/// stored `(i, j)` with `i < j`, and pairs are sorted by first element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    /// Validates and normalizes a set of pairs into a perfect matching.
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self, PfaffianError> {
        let n = pairs.len();
        let dim = 2 * n;
        let mut seen = vec![false; dim];
        let mut normalized = Vec::with_capacity(n);
        for (a, b) in pairs {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            if i == j {
                return Err(PfaffianError::InvalidPairing(format!(
                    "index {i} paired with itself"
                )));
            }
            if j >= dim {
                return Err(PfaffianError::InvalidPairing(format!(
                    "index {j} out of range for {n} pairs"
                )));
            }
            for k in [i, j] {
                if seen[k] {
                    return Err(PfaffianError::InvalidPairing(format!(
                        "index {k} appears twice"
                    )));
                }
                seen[k] = true;
            }
            normalized.push((i, j));
        }
        normalized.sort_unstable();
        Ok(Pairing { pairs: normalized })
    }

    pub fn n_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Enumerates all `(dim−1)!!` pairings of `{0, …, dim−1}`.
    ///
    /// Guarded at dimension 12 (10 395 pairings) since this is the
    /// brute-force oracle, not a production path.
    pub fn enumerate(dim: usize) -> Result<Vec<Pairing>, PfaffianError> {
        if dim % 2 != 0 {
            return Err(PfaffianError::OddDimension(dim));
        }
        if dim > super::algorithms::ENUMERATE_MAX_DIM {
            return Err(PfaffianError::DimensionTooLarge {
                dim,
                max: super::algorithms::ENUMERATE_MAX_DIM,
            });
        }
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(dim / 2);
        let mut free: Vec<usize> = (0..dim).collect();
        enumerate_rec(&mut free, &mut current, &mut out);
        Ok(out)
    }
}

fn enumerate_rec(
    free: &mut Vec<usize>,
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<Pairing>,
) {
    if free.is_empty() {
        out.push(Pairing {
            pairs: current.clone(),
        });
        return;
    }
    // Pair the lowest free index with each other free index in turn; this
    // emits every matching exactly once, already in normalized order.
    let i = free[0];
    for pos in 1..free.len() {
        let j = free[pos];
        let mut rest: Vec<usize> = free[1..pos].to_vec();
        rest.extend_from_slice(&free[pos + 1..]);
        current.push((i, j));
        enumerate_rec(&mut rest, current, out);
        current.pop();
    }
}

/// Sign of the permutation associated with a pairing, computed as
/// `(−1)^M` where `M` counts crossed pairs: quadruples with
/// `i_k < i_l < j_k < j_l`.
pub fn crossing_sign(p: &Pairing) -> i32 {
    let pairs = p.pairs();
    let mut crossings = 0usize;
    for k in 0..pairs.len() {
        for l in (k + 1)..pairs.len() {
            let (ik, jk) = pairs[k];
            let (il, jl) = pairs[l];
            if ik < il && il < jk && jk < jl {
                crossings += 1;
            }
        }
    }
    if crossings % 2 == 0 {
        1
    } else {
        -1
    }
}
