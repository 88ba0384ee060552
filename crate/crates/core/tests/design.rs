use rand::Rng;

use riskcomm_core::design::{
    exhaustive_search, greedy_search, CandidateVariable, ConstraintMode, SearchMethod,
};
use riskcomm_core::random::{random_distribution, seeded};
use riskcomm_core::{design_search, entropy, Alphabet, DesignProblem};

fn problem(seed: u64, n: usize) -> DesignProblem {
    let mut rng = seeded(seed);
    let candidates = (0..n)
        .map(|i| {
            let k = rng.random_range(1..=5);
            let law = random_distribution(&mut rng, Alphabet::indexed("v", k).unwrap());
            // integer costs make exact ties common
            CandidateVariable::new(format!("var{i:02}"), law, f64::from(rng.random_range(0..6u8))).unwrap()
        })
        .collect();
    DesignProblem {
        candidates,
        budget: f64::from(rng.random_range(0..15u8)),
        h_target: rng.random_range(0.0..4.0),
        mode: ConstraintMode::Strong,
    }
}

/// Enumerates subsets by recursion, keeping (h, cost, sorted names).
fn oracle(p: &DesignProblem) -> (Vec<String>, f64, f64) {
    fn walk(p: &DesignProblem, i: usize, pick: &mut Vec<usize>, best: &mut Option<(f64, f64, Vec<String>)>) {
        if i == p.candidates.len() {
            let h: f64 = pick.iter().map(|&k| entropy(&p.candidates[k].marginal)).sum();
            let cost: f64 = pick.iter().map(|&k| p.candidates[k].cost).sum();
            if cost > p.budget {
                return;
            }
            let mut names: Vec<String> = pick.iter().map(|&k| p.candidates[k].name.clone()).collect();
            names.sort();
            let wins = match best {
                None => true,
                Some((bh, bc, bn)) => h > *bh || (h == *bh && (cost < *bc || (cost == *bc && names < *bn))),
            };
            if wins {
                *best = Some((h, cost, names));
            }
            return;
        }
        walk(p, i + 1, pick, best);
        pick.push(i);
        walk(p, i + 1, pick, best);
        pick.pop();
    }
    let mut best = None;
    walk(p, 0, &mut Vec::new(), &mut best);
    let (h, cost, names) = best.unwrap();
    (names, h, cost)
}

#[test]
fn exhaustive_matches_recursive_oracle() {
    for seed in 0..200 {
        let p = problem(seed, 1 + seed as usize % 10);
        let s = exhaustive_search(&p).unwrap();
        let (names, h, cost) = oracle(&p);
        let mut chosen = s.chosen.clone();
        chosen.sort();
        assert_eq!(chosen, names, "seed {seed}");
        assert_eq!(s.h_x, h);
        assert_eq!(s.total_cost, cost);
        assert_eq!(s.feasible, h > p.h_target);
    }
}

#[test]
fn optimum_is_monotone_in_budget() {
    for seed in 0..50 {
        let mut p = problem(seed, 8);
        let mut last = -1.0;
        for b in 0..20 {
            p.budget = f64::from(b);
            let s = design_search(&p).unwrap();
            assert!(s.h_x >= last);
            assert!(s.total_cost <= p.budget);
            last = s.h_x;
        }
    }
}

#[test]
fn large_instances_fall_back_to_greedy() {
    let p = problem(7, 24);
    let s = design_search(&p).unwrap();
    assert_eq!(s.method, SearchMethod::Greedy);
    assert_eq!(s, greedy_search(&p).unwrap());
    assert!(s.total_cost <= p.budget);
}

#[test]
fn problem_json_round_trip() {
    let p = problem(3, 4);
    let text = serde_json::to_string(&p).unwrap();
    let back: DesignProblem = serde_json::from_str(&text).unwrap();
    assert_eq!(exhaustive_search(&back).unwrap(), exhaustive_search(&p).unwrap());
}

#[test]
fn greedy_keeps_half_of_the_optimum() {
    for seed in 0..300 {
        let p = problem(1000 + seed, 1 + seed as usize % 12);
        let best = exhaustive_search(&p).unwrap().h_x;
        let g = greedy_search(&p).unwrap();
        assert!(g.total_cost <= p.budget);
        assert!(g.h_x >= 0.5 * best - 1e-12, "seed {seed}: greedy {} vs {best}", g.h_x);
    }
}

#[test]
fn cheap_item_does_not_block_a_valuable_one() {
    let bits = |n: usize| riskcomm_core::FiniteDistribution::uniform(Alphabet::indexed("v", n).unwrap());
    let p = DesignProblem {
        candidates: vec![
            CandidateVariable::new("cheap", bits(2), 1.0).unwrap(),
            CandidateVariable::new("rich", bits(8), 10.0).unwrap(),
        ],
        budget: 10.0,
        h_target: 2.0,
        mode: ConstraintMode::Strong,
    };
    let g = greedy_search(&p).unwrap();
    assert_eq!(g.chosen, vec!["rich".to_owned()]);
    assert!(g.feasible);
}
