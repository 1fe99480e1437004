#![allow(dead_code)]

use std::collections::BTreeSet;

use hyperfactor::hypercore::binom_u64;
use hyperfactor::laminar::{LaminarFamily, SetTag};
use hyperfactor::{ColoredMultiHypergraph, Params, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn binom(n: usize, k: usize) -> usize {
    binom_u64(n as u64, k as i64).unwrap() as usize
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Degree vectors used as fixtures for `λK_n^h`, all satisfying the
/// divisibility and sum conditions. Small instances have fewer than three.
pub fn fixture_rs(n: usize, h: usize, lambda: usize) -> Vec<Vec<usize>> {
    let total = lambda * binom(n - 1, h - 1);
    let g = h / gcd(n, h);
    let mut out: Vec<Vec<usize>> = Vec::new();
    out.push(vec![total]);
    out.push(vec![g; total / g]);
    if total >= 2 * g {
        out.push(vec![total - g, g]);
    }
    // as many 2g as fit, plus one g
    let pairs = total / (2 * g);
    if pairs >= 1 {
        let mut r = vec![2 * g; pairs];
        if !total.is_multiple_of(2 * g) {
            r.push(g);
        }
        out.push(r);
    }
    // g, 2g, 3g, ... with the remainder folded into the last entry
    let mut r = Vec::new();
    let mut left = total;
    let mut step = g;
    while left > 0 {
        let take = if left >= step + (step + g) {
            step
        } else {
            left
        };
        r.push(take);
        left -= take;
        step += g;
    }
    out.push(r);
    if g <= 2 && total.is_multiple_of(2) && total >= 2 {
        out.push(vec![2; total / 2]);
    }
    for r in &mut out {
        r.sort_unstable_by(|a, b| b.cmp(a));
    }
    out.sort();
    out.dedup();
    out.retain(|r| {
        hyperfactor::check_feasibility(&Params::new(n, h, lambda, r.clone()))
            .unwrap()
            .ok
    });
    out
}

/// All non-increasing sequences of positive integers summing to `total`.
pub fn partitions(total: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=left.min(max)).rev() {
            cur.push(part);
            go(left - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, total, &mut Vec::new(), &mut out);
    out
}

/// A random laminar family over `ground`, built by recursively cutting a
/// shuffled copy of the ground into contiguous runs.
pub fn random_laminar<R: Rng>(rng: &mut R, ground: &BTreeSet<u32>) -> LaminarFamily<u32> {
    let mut order: Vec<u32> = ground.iter().copied().collect();
    order.shuffle(rng);
    let mut fam = LaminarFamily::new(ground.clone());
    let mut next_tag = 0;
    fn cut<R: Rng>(
        rng: &mut R,
        items: &[u32],
        fam: &mut LaminarFamily<u32>,
        tag: &mut usize,
        depth: usize,
    ) {
        if items.is_empty() || depth > 5 {
            return;
        }
        let mut start = 0;
        while start < items.len() {
            let len = rng.gen_range(1..=items.len() - start);
            let run = &items[start..start + len];
            if rng.gen_bool(0.7) {
                fam.push(SetTag::Other(*tag), run.iter().copied().collect())
                    .unwrap();
                *tag += 1;
                if rng.gen_bool(0.15) {
                    // duplicate member
                    fam.push(SetTag::Other(*tag), run.iter().copied().collect())
                        .unwrap();
                    *tag += 1;
                }
            }
            if len > 1 {
                cut(rng, run, fam, tag, depth + 1);
            }
            start += len;
        }
    }
    cut(rng, &order, &mut fam, &mut next_tag, 0);
    fam
}

pub const ALPHA: VertexId = VertexId(100);

/// A random connected single-color class around `ALPHA` with at most
/// `max_edges` edges and between 1 and `max_hinges` α-hinges. Non-α
/// vertices never repeat inside an edge.
pub fn random_color_class<R: Rng>(
    rng: &mut R,
    max_edges: usize,
    max_hinges: usize,
) -> ColoredMultiHypergraph {
    loop {
        let h = rng.gen_range(2..=4);
        let others: Vec<VertexId> = (1..=rng.gen_range(h..=7) as u32).map(VertexId).collect();
        let mut g = ColoredMultiHypergraph::new(h, 1, ALPHA).unwrap();
        for &v in &others {
            g.add_vertex(v).unwrap();
        }
        let edges = rng.gen_range(1..=max_edges);
        for _ in 0..edges {
            let p = if rng.gen_bool(0.6) {
                rng.gen_range(1..=h)
            } else {
                0
            };
            let mut verts: Vec<VertexId> = others.choose_multiple(rng, h - p).copied().collect();
            verts.extend(std::iter::repeat_n(ALPHA, p));
            g.add_edge(&verts, 1).unwrap();
        }
        let hinges = g.degree(ALPHA, None).unwrap();
        if (1..=max_hinges).contains(&hinges) && hyperfactor::wings::color_class_connected(&g, 1) {
            return g;
        }
    }
}
