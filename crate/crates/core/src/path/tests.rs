use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::geodesic::BallTable;
use crate::group::fixtures::*;

fn ints(x: &[i64]) -> Vec<BigInt> {
    x.iter().map(|&a| BigInt::from(a)).collect()
}

#[test]
fn integers_graph() {
    let yp = AlphabetYP::build(&spec(Z));
    let g = Gamma::new(&yp);
    let sub = g.explore(100).unwrap();
    assert!(!sub.truncated);
    let names: Vec<String> = sub.vertices.iter().map(|v| g.format_vertex(v)).collect();
    assert_eq!(names, ["[ε, ε]", "[ε, a]", "[ε, A]"]);
    let a = Vertex { pattern: Pattern::empty(), word: yp.spec().parse_word("a").unwrap() };
    let out = g.out_edges(&a).unwrap();
    let targets: Vec<String> = out.iter().map(|e| g.format_vertex(&e.target)).collect();
    assert_eq!(targets, ["[ε, ε]", "[ε, a]", "[ε, A]"]);
    assert!(out.iter().all(|e| e.label == Some(0) && e.weight == 1));
    assert_eq!(sub.edges.len(), 6);
}

#[test]
fn dihedral_edge() {
    let yp = AlphabetYP::build(&spec(DINF));
    let g = Gamma::new(&yp);
    let v = Vertex { pattern: Pattern::empty(), word: yp.spec().parse_word("rs").unwrap() };
    let out = g.out_edges(&v).unwrap();
    assert_eq!(out.len(), 7);
    for e in out.iter() {
        assert_eq!((e.label, e.weight), (Some(1), 2));
        assert!(e.target.pattern.is_empty());
        assert!(e.target.word.len() <= 2);
    }
}

#[test]
fn empty_word_vertices_are_sinks() {
    for text in [Z, Z2, DINF, P4] {
        let yp = AlphabetYP::build(&spec(text));
        let g = Gamma::new(&yp);
        for (_, info) in yp.patterns().iter().take(200) {
            let v = Vertex { pattern: info.pattern.clone(), word: Word::empty() };
            assert!(g.out_edges(&v).unwrap().is_empty());
        }
    }
}

#[test]
fn edge_weights_are_positive() {
    for text in [Z, Z2, DINF, P4] {
        let yp = AlphabetYP::build(&spec(text));
        let g = Gamma::new(&yp);
        let sub = g.explore(400).unwrap();
        for e in &sub.edges {
            assert!(e.weight > 0);
            assert!(e.source.pattern.is_strong() && !e.source.word.is_empty());
        }
    }
}

#[test]
fn dihedral_path_example() {
    let yp = AlphabetYP::build(&spec(DINF));
    let g = Gamma::new(&yp);
    let w = yp.spec().parse_word("rsr").unwrap();
    let p = g.word_to_path(&w);
    let steps: Vec<String> = p.edges.iter().map(|e| g.format_edge(e)).collect();
    assert_eq!(steps, ["[ε, rs] -2-> [ε, r]", "[ε, r] -∅-> [r, ε]"]);
    assert_eq!(p.weight, 3);
    assert_eq!(g.path_to_word(&p).unwrap(), w);
    assert_eq!(g.alpha_vector(&p).v, vec![0, 1, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn empty_path() {
    let yp = AlphabetYP::build(&spec(Z2));
    let g = Gamma::new(&yp);
    let p = g.word_to_path(&Word::empty());
    assert!(p.edges.is_empty());
    assert_eq!(p.start, Vertex { pattern: Pattern::empty(), word: Word::empty() });
    assert_eq!(g.path_to_word(&p).unwrap(), Word::empty());
    assert_eq!(g.alpha_vector(&p).v, vec![0; 4]);
}

#[test]
fn integers_alpha() {
    let yp = AlphabetYP::build(&spec(Z));
    let g = Gamma::new(&yp);
    let p = g.word_to_path(&yp.spec().parse_word("aaa").unwrap());
    assert_eq!(g.alpha_vector(&p).v, vec![3, 0]);
}

#[test]
fn round_trip() {
    for (text, max) in [(Z, 6), (Z2, 6), (DINF, 6), (P4, 5)] {
        let s = spec(text);
        let yp = AlphabetYP::build(&s);
        let g = Gamma::new(&yp);
        for w in words_up_to_weight(&s, max) {
            let p = g.word_to_path(&w);
            assert_eq!(p.weight, s.word_weight(&w));
            assert_eq!(g.path_to_word(&p).unwrap(), w);
            let pw = yp.shuffle_only(&w);
            assert_eq!(g.alpha_vector(&p), pw);
            let mut at = &p.start;
            for e in &p.edges {
                assert_eq!(&e.source, at);
                assert!(g.out_edges(at).unwrap().contains(e));
                at = &e.target;
            }
        }
    }
}

#[test]
fn broken_paths_are_rejected() {
    let yp = AlphabetYP::build(&spec(DINF));
    let g = Gamma::new(&yp);
    let mut p = g.word_to_path(&yp.spec().parse_word("rsrs").unwrap());
    p.edges.swap(0, 1);
    assert!(g.path_to_word(&p).is_err());

    let mut p = g.word_to_path(&yp.spec().parse_word("rsr").unwrap());
    p.edges.pop();
    assert!(g.path_to_word(&p).is_err());

    let mut p = g.word_to_path(&yp.spec().parse_word("rs").unwrap());
    p.edges[0].label = Some(0);
    assert!(g.path_to_word(&p).is_err());
}

#[test]
fn path_count_matches_oracle() {
    for (text, max) in [(Z, 6), (Z2, 6), (DINF, 6), (P4, 4)] {
        let s = spec(text);
        let yp = AlphabetYP::build(&s);
        let g = Gamma::new(&yp);
        let c = PatternCriterion::new(&yp);
        let counts = g.geodesic_path_counts(&c, max).unwrap();
        let ball = BallTable::build(&s, max);
        let mut expected = vec![0u64; max as usize + 1];
        for w in words_up_to_weight(&s, max) {
            if ball.is_geodesic(&s, &w).unwrap() {
                expected[s.word_weight(&w) as usize] += 1;
            }
        }
        assert_eq!(counts, expected, "{}", s.name());
    }
}

#[test]
fn parikh_examples() {
    assert_eq!(parikh(&['a', 'b'], &[]).unwrap(), vec![0, 0]);
    assert_eq!(parikh(&['a', 'b'], &['a', 'a', 'b']).unwrap(), vec![2, 1]);
    assert!(parikh(&['a', 'b'], &['c']).is_err());
}

#[test]
fn projection_of_the_dihedral_path() {
    let yp = AlphabetYP::build(&spec(DINF));
    let g = Gamma::new(&yp);
    let p = g.word_to_path(&yp.spec().parse_word("rsr").unwrap());
    let pi = p.end().pattern.clone();
    let alphabet = g.explore(1000).unwrap().edges;
    let e = edge_projection(&yp, &pi, &alphabet);
    let image = e.apply(&ints(&parikh(&alphabet, &p.edges).unwrap().iter().map(|&n| n as i64).collect::<Vec<_>>())).unwrap();
    assert_eq!(image, ints(&[0, 1, 0, 0, 0, 0, 0, 0]));

    let first = alphabet.iter().position(|x| *x == p.edges[0]).unwrap();
    let second = alphabet.iter().position(|x| *x == p.edges[1]).unwrap();
    assert_eq!(e.rows()[first], ints(&[0, 1, 0, 0, 0, 0, 0, 0]));
    assert_eq!(e.rows()[second], ints(&[0; 8]));
}

#[test]
fn projection_matches_alpha() {
    for text in [Z2, DINF, P4] {
        let yp = AlphabetYP::build(&spec(text));
        let g = Gamma::new(&yp);
        let alphabet = g.explore(5000).unwrap().edges;
        for w in words_up_to_weight(yp.spec(), 4) {
            let p = g.word_to_path(&w);
            let Ok(counts) = parikh(&alphabet, &p.edges) else { continue };
            let e = edge_projection(&yp, &p.end().pattern, &alphabet);
            let image = e.apply(&counts.iter().map(|&n| BigInt::from(n)).collect::<Vec<_>>()).unwrap();
            let alpha: Vec<BigInt> = g.alpha_vector(&p).v.iter().map(|&n| BigInt::from(n)).collect();
            assert_eq!(image, alpha);
        }
    }
}

#[test]
fn dfa_examples() {
    let even = CongruenceDfa::build(&[ints(&[1])], &ints(&[0]), &ints(&[2]), 1).unwrap();
    assert!(even.accepts(&[0, 0]).unwrap());
    assert!(!even.accepts(&[0]).unwrap());
    assert!(even.accepts(&[]).unwrap());

    let balanced = CongruenceDfa::build(&[ints(&[1, -1])], &ints(&[0]), &ints(&[3]), 2).unwrap();
    assert!(!balanced.accepts(&[0, 0, 1]).unwrap());
    assert!(balanced.accepts(&[0, 0, 1, 1]).unwrap());
    assert!(balanced.accepts(&[1, 0, 1, 0, 0, 1]).unwrap());
    assert!(balanced.accepts(&[2]).is_err());
}

#[test]
fn dfa_is_complete_and_matches_congruences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let letters = rng.gen_range(1..4);
        let k = rng.gen_range(1..3);
        let zetas: Vec<Vec<BigInt>> = (0..k).map(|_| (0..letters).map(|_| BigInt::from(rng.gen_range(-4..5))).collect()).collect();
        let thetas: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(1..6))).collect();
        let etas: Vec<BigInt> = (0..k).map(|_| BigInt::from(rng.gen_range(-5..6))).collect();
        let dfa = CongruenceDfa::build(&zetas, &etas, &thetas, letters).unwrap();
        for s in 0..dfa.state_count() {
            for a in 0..letters {
                assert!(dfa.transition(s, a) < dfa.state_count());
            }
        }
        for _ in 0..100 {
            let w: Vec<usize> = (0..rng.gen_range(0..12)).map(|_| rng.gen_range(0..letters)).collect();
            let alphabet: Vec<usize> = (0..letters).collect();
            let counts = parikh(&alphabet, &w).unwrap();
            assert_eq!(dfa.accepts(&w).unwrap(), congruences_hold(&zetas, &etas, &thetas, &counts));
        }
    }
}

#[test]
fn dot_mentions_labels_and_weights() {
    let yp = AlphabetYP::build(&spec(DINF));
    let g = Gamma::new(&yp);
    let dot = g.to_dot(&g.explore(50).unwrap());
    assert!(dot.starts_with("digraph gamma {"));
    assert!(dot.contains("label=\"2 / 2\""));
    assert!(dot.contains("[ε, rs]"));
}
