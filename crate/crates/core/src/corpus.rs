//! Enumeration and sampling of small trees and structures, shared by the
//! exhaustive test suites and the CLI batch harness.

use crate::structures::Tree;
use rand::Rng;

type Shape = Vec<(Option<u32>, Option<u32>)>;

/// All binary tree shapes with exactly `n` nodes (left/right children
/// distinguished, either may be missing). Node 0 is the root; subtree
/// nodes are numbered depth-first.
pub fn tree_shapes(n: usize) -> Vec<Shape> {
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![vec![(None, None)]];
    }
    let mut out = Vec::new();
    for left_size in 0..n {
        let right_size = n - 1 - left_size;
        let lefts = if left_size == 0 {
            vec![None]
        } else {
            tree_shapes(left_size).into_iter().map(Some).collect()
        };
        let rights = if right_size == 0 {
            vec![None]
        } else {
            tree_shapes(right_size).into_iter().map(Some).collect()
        };
        for l in &lefts {
            for r in &rights {
                let mut shape: Shape = vec![(None, None)];
                if let Some(ls) = l {
                    let off = shape.len() as u32;
                    shape[0].0 = Some(off);
                    shape.extend(ls.iter().map(|&(a, b)| {
                        (a.map(|x| x + off), b.map(|x| x + off))
                    }));
                }
                if let Some(rs) = r {
                    let off = shape.len() as u32;
                    shape[0].1 = Some(off);
                    shape.extend(rs.iter().map(|&(a, b)| {
                        (a.map(|x| x + off), b.map(|x| x + off))
                    }));
                }
                out.push(shape);
            }
        }
    }
    out
}

/// Every labeled tree with between 1 and `max_nodes` nodes over the given
/// alphabet, in deterministic order.
pub fn all_trees(max_nodes: usize, alphabet: &[String]) -> Vec<Tree> {
    let mut out = Vec::new();
    let k = alphabet.len() as u64;
    for n in 1..=max_nodes {
        for shape in tree_shapes(n) {
            let total = k.pow(n as u32);
            for code in 0..total {
                let mut labels = Vec::with_capacity(n);
                let mut c = code;
                for _ in 0..n {
                    labels.push((c % k) as u32);
                    c /= k;
                }
                out.push(
                    Tree::new(alphabet.to_vec(), labels, shape.clone())
                        .expect("enumerated shape is a valid tree"),
                );
            }
        }
    }
    out
}

/// A uniform-ish random tree with `n` nodes: each new node attaches to a
/// random free child slot of the tree built so far.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, alphabet: &[String]) -> Tree {
    assert!(n >= 1);
    let mut children: Vec<(Option<u32>, Option<u32>)> = vec![(None, None)];
    for v in 1..n as u32 {
        // Collect free slots deterministically.
        let mut slots = Vec::new();
        for (p, &(l, r)) in children.iter().enumerate() {
            if l.is_none() {
                slots.push((p as u32, true));
            }
            if r.is_none() {
                slots.push((p as u32, false));
            }
        }
        let (p, is_left) = slots[rng.random_range(0..slots.len())];
        if is_left {
            children[p as usize].0 = Some(v);
        } else {
            children[p as usize].1 = Some(v);
        }
        children.push((None, None));
    }
    let labels = (0..n)
        .map(|_| rng.random_range(0..alphabet.len()) as u32)
        .collect();
    Tree::new(alphabet.to_vec(), labels, children).expect("random tree is valid")
}

/// A random subset of `0..n` with exactly `k` elements, sorted.
pub fn random_subset<R: Rng>(rng: &mut R, n: u32, k: u32) -> Vec<u32> {
    let mut picked: Vec<u32> = rand::seq::index::sample(rng, n as usize, k as usize)
        .into_iter()
        .map(|i| i as u32)
        .collect();
    picked.sort_unstable();
    picked
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_counts_are_catalan() {
        // 1, 2, 5, 14, 42 shapes for 1..5 nodes.
        assert_eq!(tree_shapes(1).len(), 1);
        assert_eq!(tree_shapes(2).len(), 2);
        assert_eq!(tree_shapes(3).len(), 5);
        assert_eq!(tree_shapes(4).len(), 14);
        assert_eq!(tree_shapes(5).len(), 42);
    }

    #[test]
    fn all_trees_count() {
        let ab = vec!["a".to_string(), "b".to_string()];
        // sum over n of catalan(n) * 2^n = 2 + 8 + 40 + 224 = 274 for n <= 4.
        assert_eq!(all_trees(4, &ab).len(), 274);
    }

    #[test]
    fn random_trees_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let ab = vec!["a".to_string(), "b".to_string()];
        for _ in 0..50 {
            let t = random_tree(&mut rng, 8, &ab);
            assert_eq!(t.size(), 8);
        }
    }
}
