//! Boykov-Kolmogorov augmenting-path max-flow with search-tree reuse.
//!
//! Two trees grow from the terminals; when they touch, the path is augmented
//! and nodes cut off from their tree become orphans that try to re-attach
//! (adoption). Distances and timestamps bias adoption towards short paths.

use std::collections::VecDeque;

use super::{sister, Capacity, FlowProblem, MinCut, Residual};

const NONE: usize = usize::MAX;
const TERMINAL: usize = usize::MAX - 1;
const ORPHAN: usize = usize::MAX - 2;

struct Bk {
    g: Residual,
    /// Residual terminal capacity: > 0 towards the source, < 0 towards the sink.
    tr_cap: Vec<Capacity>,
    /// Arc from the node to its tree parent, or NONE / TERMINAL / ORPHAN.
    parent: Vec<usize>,
    is_sink: Vec<bool>,
    ts: Vec<u64>,
    dist: Vec<i64>,
    active: Vec<bool>,
    queue: VecDeque<usize>,
    orphans: VecDeque<usize>,
    time: u64,
    flow: Capacity,
}

pub(super) fn solve(p: &FlowProblem) -> MinCut {
    let mut bk = Bk::new(p);
    bk.run();
    let source_side =
        bk.g.reachable((0..p.n_nodes()).filter(|&v| bk.tr_cap[v] > 0));
    MinCut {
        flow: bk.flow,
        source_side,
    }
}

impl Bk {
    fn new(p: &FlowProblem) -> Self {
        let n = p.n_nodes();
        let mut flow = 0;
        let tr_cap = (0..n)
            .map(|v| {
                flow += p.source[v].min(p.sink[v]);
                p.source[v] - p.sink[v]
            })
            .collect();
        Bk {
            g: Residual::new(n, &p.arcs),
            tr_cap,
            parent: vec![NONE; n],
            is_sink: vec![false; n],
            ts: vec![0; n],
            dist: vec![0; n],
            active: vec![false; n],
            queue: VecDeque::new(),
            orphans: VecDeque::new(),
            time: 0,
            flow,
        }
    }

    fn set_active(&mut self, v: usize) {
        if !self.active[v] {
            self.active[v] = true;
            self.queue.push_back(v);
        }
    }

    fn next_active(&mut self) -> Option<usize> {
        while let Some(v) = self.queue.pop_front() {
            self.active[v] = false;
            if self.parent[v] != NONE {
                return Some(v);
            }
        }
        None
    }

    fn run(&mut self) {
        for v in 0..self.tr_cap.len() {
            if self.tr_cap[v] != 0 {
                self.is_sink[v] = self.tr_cap[v] < 0;
                self.parent[v] = TERMINAL;
                self.ts[v] = 0;
                self.dist[v] = 1;
                self.set_active(v);
            }
        }

        let mut current: Option<usize> = None;
        loop {
            let kept = current.take().filter(|&i| {
                self.active[i] = false;
                self.parent[i] != NONE
            });
            let Some(i) = kept.or_else(|| self.next_active()) else {
                break;
            };

            let middle = self.grow(i);
            self.time += 1;
            if let Some(arc) = middle {
                // Keep expanding from i next round; the flag stops set_active from queueing it.
                self.active[i] = true;
                current = Some(i);
                self.augment(arc);
                while let Some(v) = self.orphans.pop_front() {
                    if self.is_sink[v] {
                        self.adopt_sink_orphan(v);
                    } else {
                        self.adopt_source_orphan(v);
                    }
                }
            }
        }
    }

    /// Expands the tree of `i`; returns an arc from the source tree into the
    /// sink tree when the trees meet.
    fn grow(&mut self, i: usize) -> Option<usize> {
        let sink_tree = self.is_sink[i];
        for k in self.g.first[i]..self.g.first[i + 1] {
            let a = self.g.adj[k];
            // Arc carrying flow away from the source: i -> j in the source tree, j -> i in the sink tree.
            let toward = if sink_tree { sister(a) } else { a };
            if self.g.r_cap[toward] == 0 {
                continue;
            }
            let j = self.g.head[a];
            if self.parent[j] == NONE {
                self.is_sink[j] = sink_tree;
                self.parent[j] = sister(a);
                self.ts[j] = self.ts[i];
                self.dist[j] = self.dist[i] + 1;
                self.set_active(j);
            } else if self.is_sink[j] != sink_tree {
                return Some(toward);
            } else if self.ts[j] <= self.ts[i] && self.dist[j] > self.dist[i] {
                self.parent[j] = sister(a);
                self.ts[j] = self.ts[i];
                self.dist[j] = self.dist[i] + 1;
            }
        }
        None
    }

    fn orphan_front(&mut self, v: usize) {
        self.parent[v] = ORPHAN;
        self.orphans.push_front(v);
    }

    fn orphan_rear(&mut self, v: usize) {
        self.parent[v] = ORPHAN;
        self.orphans.push_back(v);
    }

    fn augment(&mut self, middle: usize) {
        let g = &self.g;
        let mut bottleneck = g.r_cap[middle];

        let mut i = g.head[sister(middle)];
        loop {
            let a = self.parent[i];
            if a == TERMINAL {
                break;
            }
            bottleneck = bottleneck.min(g.r_cap[sister(a)]);
            i = g.head[a];
        }
        bottleneck = bottleneck.min(self.tr_cap[i]);

        let mut i = g.head[middle];
        loop {
            let a = self.parent[i];
            if a == TERMINAL {
                break;
            }
            bottleneck = bottleneck.min(g.r_cap[a]);
            i = g.head[a];
        }
        bottleneck = bottleneck.min(-self.tr_cap[i]);

        self.g.r_cap[sister(middle)] += bottleneck;
        self.g.r_cap[middle] -= bottleneck;

        let mut i = self.g.head[sister(middle)];
        loop {
            let a = self.parent[i];
            if a == TERMINAL {
                break;
            }
            self.g.r_cap[a] += bottleneck;
            self.g.r_cap[sister(a)] -= bottleneck;
            if self.g.r_cap[sister(a)] == 0 {
                self.orphan_front(i);
            }
            i = self.g.head[a];
        }
        self.tr_cap[i] -= bottleneck;
        if self.tr_cap[i] == 0 {
            self.orphan_front(i);
        }

        let mut i = self.g.head[middle];
        loop {
            let a = self.parent[i];
            if a == TERMINAL {
                break;
            }
            self.g.r_cap[sister(a)] += bottleneck;
            self.g.r_cap[a] -= bottleneck;
            if self.g.r_cap[a] == 0 {
                self.orphan_front(i);
            }
            i = self.g.head[a];
        }
        self.tr_cap[i] += bottleneck;
        if self.tr_cap[i] == 0 {
            self.orphan_front(i);
        }

        self.flow += bottleneck;
    }

    /// Distance from `j` to its terminal through valid parents, or None if the
    /// chain hits an orphan. Marks the walked chain with the current time.
    fn origin_distance(&mut self, start: usize) -> Option<i64> {
        let mut j = start;
        let mut d = 0i64;
        loop {
            if self.ts[j] == self.time {
                d += self.dist[j];
                break;
            }
            let a = self.parent[j];
            d += 1;
            if a == TERMINAL {
                self.ts[j] = self.time;
                self.dist[j] = 1;
                break;
            }
            if a == ORPHAN {
                return None;
            }
            j = self.g.head[a];
        }
        let mut j = start;
        let mut dd = d;
        while self.ts[j] != self.time {
            self.ts[j] = self.time;
            self.dist[j] = dd;
            dd -= 1;
            j = self.g.head[self.parent[j]];
        }
        Some(d)
    }

    fn adopt_source_orphan(&mut self, i: usize) {
        self.adopt(i, false);
    }

    fn adopt_sink_orphan(&mut self, i: usize) {
        self.adopt(i, true);
    }

    fn adopt(&mut self, i: usize, sink_tree: bool) {
        let mut best: Option<(usize, i64)> = None;
        for k in self.g.first[i]..self.g.first[i + 1] {
            let a0 = self.g.adj[k];
            // Arc that would carry flow through the new parent link.
            let carrier = if sink_tree { a0 } else { sister(a0) };
            if self.g.r_cap[carrier] == 0 {
                continue;
            }
            let j = self.g.head[a0];
            if self.is_sink[j] != sink_tree || self.parent[j] == NONE {
                continue;
            }
            if let Some(d) = self.origin_distance(j) {
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((a0, d));
                }
            }
        }

        if let Some((a0, d)) = best {
            self.parent[i] = a0;
            self.ts[i] = self.time;
            self.dist[i] = d + 1;
            return;
        }

        for k in self.g.first[i]..self.g.first[i + 1] {
            let a0 = self.g.adj[k];
            let j = self.g.head[a0];
            let a = self.parent[j];
            if self.is_sink[j] != sink_tree || a == NONE {
                continue;
            }
            let carrier = if sink_tree { a0 } else { sister(a0) };
            if self.g.r_cap[carrier] > 0 {
                self.set_active(j);
            }
            if a != TERMINAL && a != ORPHAN && self.g.head[a] == i {
                self.orphan_rear(j);
            }
        }
        self.parent[i] = NONE;
    }
}
