use rand::Rng;

use super::{is_admissible, monochrome_decomposition, ColoredGraph};
use crate::error::{Error, Result};
use crate::model::{Degree, Degrees};

#[derive(Clone, Copy, Debug)]
enum Move {
    /// New vertex `x` with `color`-edge `from → x`.
    Out { color: usize, from: usize },
    /// New vertex `x` with `color`-edge `x → to`.
    In { color: usize, to: usize },
    /// `color`-edge `from → to` closing a path of length `d_color − 1`.
    Close {
        color: usize,
        from: usize,
        to: usize,
    },
}

fn legal_moves(g: &ColoredGraph, degrees: &Degrees) -> Vec<Move> {
    let dec = monochrome_decomposition(g).expect("extensions stay admissible");
    let mut moves = Vec::new();
    for (c, col) in dec.colors.iter().enumerate() {
        let color = c + 1;
        let mut has_out = vec![false; g.n];
        let mut has_in = vec![false; g.n];
        for (u, v) in g.edges(color) {
            has_out[u] = true;
            has_in[v] = true;
        }
        for v in 0..g.n {
            if !has_out[v] {
                moves.push(Move::Out { color, from: v });
            }
            if !has_in[v] {
                moves.push(Move::In { color, to: v });
            }
        }
        if let Degree::Finite(d) = degrees.of(color) {
            for path in col.paths.iter().filter(|p| p.len() as u64 == d) {
                moves.push(Move::Close {
                    color,
                    from: path[path.len() - 1],
                    to: path[0],
                });
            }
        }
    }
    moves
}

/// Applies `steps` direct extensions, each drawn uniformly from the legal ones.
pub fn random_extension<R: Rng + ?Sized>(
    g: &ColoredGraph,
    steps: usize,
    degrees: &Degrees,
    rng: &mut R,
) -> Result<ColoredGraph> {
    if !is_admissible(g) {
        return Err(Error::NotAdmissible);
    }
    let mut h = g.clone();
    h.ensure_colors(degrees.k());
    for _ in 0..steps {
        let moves = legal_moves(&h, degrees);
        if moves.is_empty() {
            return Err(Error::NoLegalExtension);
        }
        match moves[rng.gen_range(0..moves.len())] {
            Move::Out { color, from } => {
                let x = h.add_vertex();
                h.add_edge(color, from, x)?;
            }
            Move::In { color, to } => {
                let x = h.add_vertex();
                h.add_edge(color, x, to)?;
            }
            Move::Close { color, from, to } => {
                h.add_edge(color, from, to)?;
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use num_rational::Rational64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::{graph_of_word, neagu_characteristic};
    use crate::word::Word;

    #[test]
    fn zero_steps_is_identity() {
        let g = graph_of_word(&"g1 g2".parse::<Word>().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            random_extension(&g, 0, &"3,3".parse().unwrap(), &mut rng).unwrap(),
            g
        );
    }

    #[test]
    fn worked_chain_by_hand() {
        // a color-3 path of length 3 closed into a 4-cycle, d_3 = 4
        let degrees: Degrees = "inf,inf,4".parse().unwrap();
        let mut g = ColoredGraph::new(2, 3);
        g.add_edge(3, 0, 1).unwrap();
        let chi0 = neagu_characteristic(&g, &degrees).unwrap();
        let a = g.add_vertex();
        g.add_edge(3, 1, a).unwrap();
        let b = g.add_vertex();
        g.add_edge(3, a, b).unwrap();
        let moves = legal_moves(&g, &degrees);
        assert!(moves
            .iter()
            .any(|m| matches!(m, Move::Close { color: 3, from, to: 0 } if *from == b)));
        g.add_edge(3, b, 0).unwrap();
        assert!(is_admissible(&g));
        assert_eq!(neagu_characteristic(&g, &degrees).unwrap(), chi0);
        assert_eq!(chi0, Rational64::from_integer(1));
    }

    #[test]
    fn vertex_adding_on_word_graph() {
        let g = graph_of_word(&"g1 g2".parse::<Word>().unwrap());
        let moves = legal_moves(&g, &"3,3".parse().unwrap());
        // vertex 1 has no outgoing color-1 edge
        assert!(moves
            .iter()
            .any(|m| matches!(m, Move::Out { color: 1, from: 1 })));
        assert!(!moves
            .iter()
            .any(|m| matches!(m, Move::Out { color: 1, from: 0 })));
    }

    #[test]
    fn no_moves_on_saturated_graph() {
        let mut g = ColoredGraph::new(1, 1);
        g.add_edge(1, 0, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            random_extension(&g, 1, &"2".parse().unwrap(), &mut rng),
            Err(Error::NoLegalExtension)
        );
    }
}
