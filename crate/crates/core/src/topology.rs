//! 1-ring adjacency and the parity split into embedding and prediction sets.

use std::fmt;
use std::str::FromStr;

use crate::mesh_io::Face;

/// Which 1-based vertex ordinals carry data. `Odd` embeds into ordinals
/// 1, 3, 5, ... (0-based indices 0, 2, 4, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Parity {
    #[default]
    Odd,
    Even,
}

impl Parity {
    /// True when 0-based vertex `index` belongs to the embedding set.
    pub fn embeds(self, index: usize) -> bool {
        let ordinal_is_odd = index.is_multiple_of(2);
        match self {
            Parity::Odd => ordinal_is_odd,
            Parity::Even => !ordinal_is_odd,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            other => Err(format!("parity must be \"odd\" or \"even\", got {other:?}")),
        }
    }
}

/// Sorted, duplicate-free neighbor list for each of `n_vertices` vertices.
pub fn build_adjacency(n_vertices: usize, faces: &[Face]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n_vertices];
    for &[a, b, c] in faces {
        for (p, q) in [(a, b), (b, c), (c, a)] {
            if p != q {
                adj[p].push(q);
                adj[q].push(p);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub parity: Parity,
    /// Embedding-set vertex indices, ascending.
    pub embedded: Vec<usize>,
    /// `predictors[i]` holds the opposite-parity 1-ring neighbors of
    /// `embedded[i]`, ascending.
    pub predictors: Vec<Vec<usize>>,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.embedded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embedded.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.embedded
            .iter()
            .copied()
            .zip(self.predictors.iter().map(Vec::as_slice))
    }
}

pub fn partition(n_vertices: usize, adjacency: &[Vec<usize>], parity: Parity) -> Partition {
    let embedded: Vec<usize> = (0..n_vertices).filter(|&v| parity.embeds(v)).collect();
    let predictors = embedded
        .iter()
        .map(|&v| {
            adjacency
                .get(v)
                .map(|n| n.iter().copied().filter(|&w| !parity.embeds(w)).collect())
                .unwrap_or_default()
        })
        .collect();
    Partition {
        parity,
        embedded,
        predictors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_face() {
        let adj = build_adjacency(3, &[[0, 1, 2]]);
        assert_eq!(adj, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
    }

    #[test]
    fn two_faces() {
        let adj = build_adjacency(4, &[[0, 1, 2], [1, 2, 3]]);
        assert_eq!(adj[1], vec![0, 2, 3]);
    }

    #[test]
    fn worked_neighborhood() {
        // 1-based vertex 3 surrounded by 2, 4, 8, 9, 16, 17; shifted to 0-based.
        let ring = [1usize, 3, 7, 8, 15, 16];
        let faces: Vec<Face> = (0..ring.len())
            .map(|i| [2, ring[i], ring[(i + 1) % ring.len()]])
            .collect();
        let adj = build_adjacency(17, &faces);
        let p = partition(17, &adj, Parity::Odd);
        let slot = p.embedded.iter().position(|&v| v == 2).unwrap();
        let one_based: Vec<usize> = p.predictors[slot].iter().map(|v| v + 1).collect();
        assert_eq!(one_based, vec![2, 4, 8, 16]);
    }

    #[test]
    fn isolated_vertex_has_no_predictors() {
        let adj = build_adjacency(5, &[[1, 2, 3]]);
        let p = partition(5, &adj, Parity::Odd);
        assert_eq!(p.embedded, vec![0, 2, 4]);
        assert!(p.predictors[0].is_empty());
        assert!(p.predictors[2].is_empty());
        assert_eq!(p.predictors[1], vec![1, 3]);
    }

    #[test]
    fn set_sizes() {
        let adj = build_adjacency(7, &[]);
        assert_eq!(partition(7, &adj, Parity::Odd).len(), 4);
        assert_eq!(partition(7, &adj, Parity::Even).len(), 3);
    }

    #[test]
    fn parity_parse() {
        assert_eq!("odd".parse::<Parity>(), Ok(Parity::Odd));
        assert_eq!("even".parse::<Parity>(), Ok(Parity::Even));
        assert!("both".parse::<Parity>().is_err());
    }

    fn arb_faces() -> impl Strategy<Value = (usize, Vec<Face>)> {
        (3usize..40).prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(proptest::array::uniform3(0..n), 0..60),
            )
        })
    }

    proptest! {
        #[test]
        fn adjacency_symmetric((n, faces) in arb_faces()) {
            let adj = build_adjacency(n, &faces);
            for v in 0..n {
                prop_assert!(adj[v].windows(2).all(|w| w[0] < w[1]));
                for &w in &adj[v] {
                    prop_assert!(adj[w].binary_search(&v).is_ok());
                    prop_assert!(faces.iter().any(|f| f.contains(&v) && f.contains(&w)));
                }
            }
        }

        #[test]
        fn predictors_opposite_parity((n, faces) in arb_faces(), even in any::<bool>()) {
            let parity = if even { Parity::Even } else { Parity::Odd };
            let adj = build_adjacency(n, &faces);
            let p = partition(n, &adj, parity);
            let expected = if even { n / 2 } else { n.div_ceil(2) };
            prop_assert_eq!(p.len(), expected);
            for (v, preds) in p.iter() {
                prop_assert!(parity.embeds(v));
                for &w in preds {
                    prop_assert!(!parity.embeds(w));
                    prop_assert_eq!(w % 2 == v % 2, false);
                    prop_assert!(adj[v].contains(&w));
                    prop_assert!(!p.embedded.contains(&w));
                }
            }
        }
    }
}
