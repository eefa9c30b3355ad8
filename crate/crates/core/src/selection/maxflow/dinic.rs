//! Dinic's algorithm with an explicit-stack path search, so path length is
//! not bounded by the call stack.

use std::collections::VecDeque;

use super::{sister, FlowProblem, MinCut, PairArc, Residual};

pub(super) fn solve(p: &FlowProblem) -> MinCut {
    let n = p.n_nodes();
    let (s, t) = (n, n + 1);
    let mut arcs: Vec<PairArc> = p.arcs.clone();
    for v in 0..n {
        if p.source[v] > 0 {
            arcs.push(PairArc {
                a: s,
                b: v,
                forward: p.source[v],
                backward: 0,
            });
        }
        if p.sink[v] > 0 {
            arcs.push(PairArc {
                a: v,
                b: t,
                forward: p.sink[v],
                backward: 0,
            });
        }
    }
    let mut g = Residual::new(n + 2, &arcs);
    let mut flow = 0;
    let mut level = vec![-1i64; n + 2];
    let mut cursor = vec![0usize; n + 2];
    let mut path: Vec<usize> = Vec::new();

    loop {
        // Level graph by BFS from the source.
        level.fill(-1);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &a in g.arcs_of(v) {
                let w = g.head[a];
                if level[w] < 0 && g.r_cap[a] > 0 {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if level[t] < 0 {
            break;
        }
        cursor.copy_from_slice(&g.first[..n + 2]);

        // Blocking flow.
        path.clear();
        let mut v = s;
        loop {
            if v == t {
                let bottleneck = path.iter().map(|&a| g.r_cap[a]).min().unwrap_or(0);
                for &a in &path {
                    g.r_cap[a] -= bottleneck;
                    g.r_cap[sister(a)] += bottleneck;
                }
                flow += bottleneck;
                // Retreat to the tail of the first saturated arc.
                let cut_at = path.iter().position(|&a| g.r_cap[a] == 0).unwrap_or(0);
                path.truncate(cut_at);
                v = path.last().map_or(s, |&a| g.head[a]);
                continue;
            }
            let mut advanced = false;
            while cursor[v] < g.first[v + 1] {
                let a = g.adj[cursor[v]];
                let w = g.head[a];
                if g.r_cap[a] > 0 && level[w] == level[v] + 1 {
                    path.push(a);
                    v = w;
                    advanced = true;
                    break;
                }
                cursor[v] += 1;
            }
            if advanced {
                continue;
            }
            if v == s {
                break;
            }
            // Dead end: prune v and retreat.
            level[v] = -1;
            let a = path
                .pop()
                .expect("non-source node has an incoming path arc");
            v = g.head[sister(a)];
            cursor[v] += 1;
        }
    }

    let reach = g.reachable(std::iter::once(s));
    MinCut {
        flow,
        source_side: reach[..n].to_vec(),
    }
}
