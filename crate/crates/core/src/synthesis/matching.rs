//! Maximum matching where each right node can absorb several left nodes.

use std::collections::VecDeque;

const NONE: u32 = u32::MAX;
const INF: u32 = u32::MAX;

/// Left nodes with adjacency lists into right nodes of given capacity.
#[derive(Debug, Clone, Default)]
pub struct CapacitatedGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    capacity: Vec<u32>,
}

impl CapacitatedGraph {
    pub fn new(capacity: Vec<u32>) -> Self {
        CapacitatedGraph {
            offsets: vec![0],
            targets: Vec::new(),
            capacity,
        }
    }

    pub fn add_right(&mut self, capacity: u32) -> u32 {
        self.capacity.push(capacity);
        (self.capacity.len() - 1) as u32
    }

    pub fn add_left(&mut self, neighbors: &[u32]) -> usize {
        self.targets.extend_from_slice(neighbors);
        self.offsets.push(self.targets.len());
        self.offsets.len() - 2
    }

    pub fn left_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn right_count(&self) -> usize {
        self.capacity.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn capacity(&self, right: u32) -> u32 {
        self.capacity[right as usize]
    }

    pub fn neighbors(&self, left: usize) -> &[u32] {
        &self.targets[self.offsets[left]..self.offsets[left + 1]]
    }
}

/// `assigned[left]` is the right node holding it, if any.
#[derive(Debug, Clone)]
pub struct Matching {
    pub assigned: Vec<Option<u32>>,
    pub size: usize,
}

impl Matching {
    pub fn is_left_perfect(&self) -> bool {
        self.size == self.assigned.len()
    }
}

struct State<'g> {
    g: &'g CapacitatedGraph,
    slot_start: Vec<usize>,
    fill: Vec<u32>,
    owner: Vec<u32>,
    slot_of: Vec<u32>,
    right_of: Vec<u32>,
}

impl<'g> State<'g> {
    fn new(g: &'g CapacitatedGraph) -> Self {
        let mut slot_start = Vec::with_capacity(g.right_count() + 1);
        let mut acc = 0usize;
        for &c in &g.capacity {
            slot_start.push(acc);
            acc += c as usize;
        }
        slot_start.push(acc);
        State {
            g,
            slot_start,
            fill: vec![0; g.right_count()],
            owner: vec![NONE; acc],
            slot_of: vec![NONE; g.left_count()],
            right_of: vec![NONE; g.left_count()],
        }
    }

    fn has_room(&self, v: u32) -> bool {
        self.fill[v as usize] < self.g.capacity[v as usize]
    }

    fn occupants(&self, v: u32) -> std::ops::Range<usize> {
        let s = self.slot_start[v as usize];
        s..s + self.fill[v as usize] as usize
    }

    fn take_room(&mut self, u: usize, v: u32) {
        let slot = self.slot_start[v as usize] + self.fill[v as usize] as usize;
        self.fill[v as usize] += 1;
        self.owner[slot] = u as u32;
        self.slot_of[u] = slot as u32;
        self.right_of[u] = v;
    }

    fn place(&mut self, u: usize, v: u32, slot: usize) {
        self.owner[slot] = u as u32;
        self.slot_of[u] = slot as u32;
        self.right_of[u] = v;
    }

    fn greedy(&mut self) {
        for u in 0..self.g.left_count() {
            if let Some(&v) = self.g.neighbors(u).iter().find(|&&v| self.has_room(v)) {
                self.take_room(u, v);
            }
        }
    }

    /// Layers left nodes by alternating distance from the free ones.
    /// Returns the layer at which a right node with room was first seen.
    fn bfs(&self, dist: &mut [u32], right_seen: &mut [bool]) -> Option<u32> {
        let mut queue = VecDeque::new();
        for u in 0..self.g.left_count() {
            if self.right_of[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        right_seen.iter_mut().for_each(|s| *s = false);
        let mut limit = None;
        while let Some(u) = queue.pop_front() {
            if limit.is_some_and(|l| dist[u] >= l) {
                break;
            }
            for &v in self.g.neighbors(u) {
                if self.right_of[u] == v || right_seen[v as usize] {
                    continue;
                }
                right_seen[v as usize] = true;
                if self.has_room(v) {
                    limit.get_or_insert(dist[u]);
                    continue;
                }
                for slot in self.occupants(v) {
                    let w = self.owner[slot] as usize;
                    if dist[w] == INF {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        limit
    }

    /// Depth-first augmentation along the BFS layers, without recursion.
    fn augment(&mut self, root: usize, limit: u32, dist: &mut [u32], dead: &mut [u32], phase: u32, cursor: &mut [u32]) -> bool {
        // Frame: left node, position within its adjacency, slot being tried.
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, cursor[root] as usize, usize::MAX)];
        loop {
            let Some(&mut (u, ref mut ai, ref mut si)) = stack.last_mut() else {
                return false;
            };
            let adj = self.g.neighbors(u);
            if *ai >= adj.len() {
                dist[u] = INF;
                stack.pop();
                match stack.last_mut() {
                    Some(parent) => parent.2 += 1,
                    None => return false,
                }
                continue;
            }
            let v = adj[*ai];
            if dead[v as usize] == phase || self.right_of[u] == v {
                *ai += 1;
                *si = usize::MAX;
                continue;
            }
            if *si == usize::MAX {
                if self.has_room(v) {
                    break;
                }
                if dist[u] >= limit {
                    *ai += 1;
                    continue;
                }
                *si = self.occupants(v).start;
            }
            let range = self.occupants(v);
            let want = dist[u].saturating_add(1);
            let mut next = None;
            let mut live = false;
            let mut s = (*si).max(range.start);
            while s < range.end {
                let w = self.owner[s] as usize;
                if dist[w] == want {
                    next = Some((s, w));
                    break;
                }
                if dist[w] != INF {
                    live = true;
                }
                s += 1;
            }
            match next {
                Some((s, w)) => {
                    *si = s;
                    cursor[u] = *ai as u32;
                    stack.push((w, cursor[w] as usize, usize::MAX));
                }
                None => {
                    if !live && *si == range.start {
                        dead[v as usize] = phase;
                    }
                    *ai += 1;
                    *si = usize::MAX;
                }
            }
        }
        // The top frame found room; shift every node on the path one step.
        let (last, ai, _) = *stack.last().unwrap();
        let v = self.g.neighbors(last)[ai];
        let mut moved: Vec<(usize, u32, usize)> = Vec::with_capacity(stack.len());
        for i in 0..stack.len() - 1 {
            let (u, ai, si) = stack[i];
            moved.push((u, self.g.neighbors(u)[ai], si));
        }
        self.take_room(last, v);
        for (u, v, slot) in moved {
            self.place(u, v, slot);
        }
        for &(u, _, _) in &stack {
            dist[u] = INF;
        }
        true
    }
}

/// Hopcroft-Karp style phases over the slot expansion of the right side.
/// Deterministic: left nodes and edges are visited in index order.
pub fn max_matching(g: &CapacitatedGraph) -> Matching {
    let mut st = State::new(g);
    st.greedy();
    let n = g.left_count();
    let mut dist = vec![INF; n];
    let mut right_seen = vec![false; g.right_count()];
    let mut dead = vec![0u32; g.right_count()];
    let mut cursor = vec![0u32; n];
    let mut phase = 0u32;
    while let Some(limit) = st.bfs(&mut dist, &mut right_seen) {
        phase += 1;
        cursor.iter_mut().for_each(|c| *c = 0);
        let mut progress = false;
        for u in 0..n {
            if st.right_of[u] == NONE && dist[u] == 0 {
                progress |= st.augment(u, limit, &mut dist, &mut dead, phase, &mut cursor);
            }
        }
        if !progress {
            break;
        }
    }
    let assigned: Vec<Option<u32>> = st
        .right_of
        .iter()
        .map(|&v| (v != NONE).then_some(v))
        .collect();
    let size = assigned.iter().filter(|a| a.is_some()).count();
    Matching { assigned, size }
}

/// For a matching that leaves some left node free, the left nodes reachable
/// from it by alternating paths together with the right nodes they see.
/// Every such right node is full, so the left side exceeds the total
/// capacity of its neighborhood by one.
pub fn hall_set(g: &CapacitatedGraph, m: &Matching) -> Option<(Vec<usize>, Vec<u32>)> {
    let start = m.assigned.iter().position(|a| a.is_none())?;
    let mut by_right: Vec<Vec<usize>> = vec![Vec::new(); g.right_count()];
    for (u, a) in m.assigned.iter().enumerate() {
        if let Some(v) = a {
            by_right[*v as usize].push(u);
        }
    }
    let mut seen_left = vec![false; g.left_count()];
    let mut seen_right = vec![false; g.right_count()];
    let mut queue = VecDeque::from([start]);
    seen_left[start] = true;
    let mut rights = Vec::new();
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if std::mem::replace(&mut seen_right[v as usize], true) {
                continue;
            }
            rights.push(v);
            for &w in &by_right[v as usize] {
                if !std::mem::replace(&mut seen_left[w], true) {
                    queue.push_back(w);
                }
            }
        }
    }
    let lefts: Vec<usize> = (0..g.left_count()).filter(|&u| seen_left[u]).collect();
    rights.sort_unstable();
    Some((lefts, rights))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(g: &CapacitatedGraph) -> usize {
        fn go(g: &CapacitatedGraph, u: usize, load: &mut Vec<u32>) -> usize {
            if u == g.left_count() {
                return 0;
            }
            let mut best = go(g, u + 1, load);
            for &v in g.neighbors(u) {
                if load[v as usize] < g.capacity(v) {
                    load[v as usize] += 1;
                    best = best.max(1 + go(g, u + 1, load));
                    load[v as usize] -= 1;
                }
            }
            best
        }
        go(g, 0, &mut vec![0; g.right_count()])
    }

    fn check(g: &CapacitatedGraph, m: &Matching) {
        let mut load = vec![0u32; g.right_count()];
        for (u, a) in m.assigned.iter().enumerate() {
            if let Some(v) = a {
                assert!(g.neighbors(u).contains(v));
                load[*v as usize] += 1;
            }
        }
        for v in 0..g.right_count() {
            assert!(load[v] <= g.capacity(v as u32));
        }
    }

    #[test]
    fn greedy_trap_is_repaired() {
        let mut g = CapacitatedGraph::new(vec![1, 1]);
        g.add_left(&[0, 1]);
        g.add_left(&[0]);
        let m = max_matching(&g);
        check(&g, &m);
        assert!(m.is_left_perfect());
        assert_eq!(m.assigned, vec![Some(1), Some(0)]);
    }

    #[test]
    fn hall_set_when_short() {
        let mut g = CapacitatedGraph::new(vec![2, 1]);
        for _ in 0..3 {
            g.add_left(&[0]);
        }
        g.add_left(&[1]);
        let m = max_matching(&g);
        assert_eq!(m.size, 3);
        let (lefts, rights) = hall_set(&g, &m).unwrap();
        assert_eq!(lefts, vec![0, 1, 2]);
        assert_eq!(rights, vec![0]);
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let rights = rng.gen_range(1..5);
            let caps = (0..rights).map(|_| rng.gen_range(0..3)).collect();
            let mut g = CapacitatedGraph::new(caps);
            for _ in 0..rng.gen_range(0..8) {
                let deg = rng.gen_range(0..=rights);
                let mut nb: Vec<u32> = (0..rights as u32).collect();
                for i in 0..deg {
                    let j = rng.gen_range(i..rights);
                    nb.swap(i, j);
                }
                nb.truncate(deg);
                g.add_left(&nb);
            }
            let m = max_matching(&g);
            check(&g, &m);
            assert_eq!(m.size, brute_force(&g));
            if let Some((lefts, rights)) = hall_set(&g, &m) {
                let cap: u32 = rights.iter().map(|&v| g.capacity(v)).sum();
                assert_eq!(lefts.len() as u32, cap + 1);
            }
        }
    }
}
