//! Exhaustive reference for tiny orders: every edge subset, a 4-cycle test by
//! explicit cycle masks and isomorphism by trying every permutation. Shares
//! no code with the main search or the bit-row kernel.

use super::SearchError;

/// Largest order the reference will attempt (`2^21` subsets at `n = 7`).
pub const ORACLE_MAX_N: usize = 7;

struct Universe {
    n: usize,
    pairs: Vec<(usize, usize)>,
    cycles: Vec<u32>,
}

impl Universe {
    fn new(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let bit = |a: usize, b: usize| {
            let key = (a.min(b), a.max(b));
            1u32 << pairs.iter().position(|&p| p == key).expect("pair exists")
        };
        let mut cycles = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        // the three 4-cycles on {a, b, c, d}
                        for [w, x, y, z] in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
                            cycles.push(bit(w, x) | bit(x, y) | bit(y, z) | bit(z, w));
                        }
                    }
                }
            }
        }
        Universe { n, pairs, cycles }
    }

    fn c4_free(&self, mask: u32) -> bool {
        self.cycles.iter().all(|&c| mask & c != c)
    }

    /// Smallest edge mask over all relabellings.
    fn canonical(&self, mask: u32, perms: &[Vec<usize>]) -> u32 {
        perms
            .iter()
            .map(|p| {
                self.pairs
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .fold(0u32, |acc, (_, &(i, j))| {
                        let key = (p[i].min(p[j]), p[i].max(p[j]));
                        acc | 1 << self.pairs.iter().position(|&q| q == key).unwrap()
                    })
            })
            .min()
            .unwrap_or(mask)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn check(n: usize) -> Result<Universe, SearchError> {
    if n > ORACLE_MAX_N {
        return Err(SearchError::TooLarge {
            n,
            limit: ORACLE_MAX_N,
        });
    }
    Ok(Universe::new(n))
}

/// `ex(n, C4)` by scanning all `2^C(n,2)` graphs.
pub fn brute_force_oracle(n: usize) -> Result<u64, SearchError> {
    let u = check(n)?;
    let m = u.pairs.len();
    Ok((0..1u32 << m)
        .filter(|&mask| u.c4_free(mask))
        .map(|mask| mask.count_ones() as u64)
        .max()
        .unwrap_or(0))
}

/// All C4-free graphs with exactly `edges` edges, one per isomorphism class,
/// as edge lists over `0..n`.
pub fn brute_force_classes(n: usize, edges: u64) -> Result<Vec<Vec<(usize, usize)>>, SearchError> {
    let u = check(n)?;
    let perms = permutations(u.n);
    let m = u.pairs.len();
    let mut classes: Vec<u32> = (0..1u32 << m)
        .filter(|&mask| mask.count_ones() as u64 == edges && u.c4_free(mask))
        .map(|mask| u.canonical(mask, &perms))
        .collect();
    classes.sort_unstable();
    classes.dedup();
    Ok(classes
        .into_iter()
        .map(|mask| {
            (0..m)
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| u.pairs[k])
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        // K1, K2, triangle, C4-free maxima on 4 and 5 vertices
        let got: Vec<u64> = (0..=5).map(|n| brute_force_oracle(n).unwrap()).collect();
        assert_eq!(got, vec![0, 0, 1, 3, 4, 6]);
        assert!(matches!(
            brute_force_oracle(8),
            Err(SearchError::TooLarge { .. })
        ));
    }

    #[test]
    fn cycle_masks_are_complete() {
        // K4 contains exactly three 4-cycles
        assert_eq!(Universe::new(4).cycles.len(), 3);
        assert_eq!(Universe::new(5).cycles.len(), 15);
    }

    #[test]
    fn triangle_classes() {
        // on 3 vertices with 1 edge there is one class
        assert_eq!(brute_force_classes(3, 1).unwrap().len(), 1);
        assert_eq!(brute_force_classes(4, 4).unwrap().len(), 1);
    }
}
