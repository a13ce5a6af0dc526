//! Sorted rotations of both haplotypes and the lcp-interval tree over them.
//!
//! A rotation is identified by `u = hap * n + pos`. All `2n` rotations are
//! sorted by cyclic prefix doubling; identical rotations share a class. The
//! longest common prefix between consecutive classes is computed with Kasai's
//! scan along each cycle, and the lcp-interval tree is walked bottom-up so
//! every internal node is visited with its depth and a partition of its
//! rotations into children. Two rotations meet at exactly one node: the one
//! whose depth is their longest common extension.

use crate::genome::DiploidGenome;

pub struct RotationIndex<'g> {
    genome: &'g DiploidGenome,
    n: usize,
    /// Rotations in sorted order.
    order: Vec<u32>,
    /// `class_start[c]..class_start[c + 1]` indexes `order` for class `c`.
    class_start: Vec<u32>,
    /// `lcp[c]` = longest common prefix of classes `c - 1` and `c`; `lcp[0] = 0`.
    lcp: Vec<u32>,
}

/// An internal node of the lcp-interval tree.
pub struct Node<'a> {
    pub id: u32,
    /// Common prefix length of all rotations below this node.
    pub depth: usize,
    /// The node's rotations; children are contiguous runs.
    pub rotations: &'a [u32],
    /// `bounds[i]..bounds[i + 1]` is child `i` within `rotations`.
    pub bounds: &'a [usize],
}

impl Node<'_> {
    pub fn n_children(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn child(&self, i: usize) -> &[u32] {
        &self.rotations[self.bounds[i]..self.bounds[i + 1]]
    }
}

impl<'g> RotationIndex<'g> {
    pub fn new(genome: &'g DiploidGenome) -> Self {
        let n = genome.len();
        let m = 2 * n;
        assert!(
            m < u32::MAX as usize,
            "genome too large for 32-bit rotation ids"
        );
        let shift = |u: u32, d: usize| -> u32 {
            let hap = u as usize / n;
            let pos = u as usize % n;
            (hap * n + (pos + d) % n) as u32
        };

        let first: Vec<u32> = (0..m).map(|u| genome.hap(u / n).at(u % n) as u32).collect();
        // counting sort by first symbol
        let mut cnt = vec![0u32; 257];
        for &c in &first {
            cnt[c as usize + 1] += 1;
        }
        for i in 1..cnt.len() {
            cnt[i] += cnt[i - 1];
        }
        let mut order = vec![0u32; m];
        for u in 0..m {
            let c = first[u] as usize;
            order[cnt[c] as usize] = u as u32;
            cnt[c] += 1;
        }
        let mut class = vec![0u32; m];
        let mut classes = 1u32;
        for i in 1..m {
            if first[order[i] as usize] != first[order[i - 1] as usize] {
                classes += 1;
            }
            class[order[i] as usize] = classes - 1;
        }
        drop(first);

        let mut shifted = vec![0u32; m];
        let mut next_class = vec![0u32; m];
        let mut cnt = vec![0u32; m + 1];
        let mut h = 1usize;
        while h < n && (classes as usize) < m {
            for i in 0..m {
                shifted[i] = shift(order[i], n - h % n);
            }
            cnt[..classes as usize + 1].fill(0);
            for &u in &shifted {
                cnt[class[u as usize] as usize + 1] += 1;
            }
            for i in 1..=classes as usize {
                cnt[i] += cnt[i - 1];
            }
            for &u in &shifted {
                let c = class[u as usize] as usize;
                order[cnt[c] as usize] = u;
                cnt[c] += 1;
            }
            next_class[order[0] as usize] = 0;
            let mut k = 0u32;
            for i in 1..m {
                let (a, b) = (order[i], order[i - 1]);
                let ka = (class[a as usize], class[shift(a, h) as usize]);
                let kb = (class[b as usize], class[shift(b, h) as usize]);
                if ka != kb {
                    k += 1;
                }
                next_class[a as usize] = k;
            }
            std::mem::swap(&mut class, &mut next_class);
            classes = k + 1;
            h *= 2;
        }
        drop(shifted);
        drop(next_class);
        drop(cnt);

        let mut class_start = vec![0u32; classes as usize + 1];
        for &u in &order {
            class_start[class[u as usize] as usize + 1] += 1;
        }
        for i in 1..class_start.len() {
            class_start[i] += class_start[i - 1];
        }

        // Kasai along each cycle
        let mut lcp = vec![0u32; classes as usize];
        for hap in 0..2 {
            let mut k = 0usize;
            for pos in 0..n {
                let u = (hap * n + pos) as u32;
                let c = class[u as usize] as usize;
                if c == 0 {
                    k = 0;
                    continue;
                }
                let v = order[class_start[c - 1] as usize];
                let (hu, pu) = (hap, pos);
                let (hv, pv) = (v as usize / n, v as usize % n);
                let (su, sv) = (genome.hap(hu), genome.hap(hv));
                while k < n && su.at(pu + k) == sv.at(pv + k) {
                    k += 1;
                }
                debug_assert!(k < n, "distinct classes must differ within one turn");
                lcp[c] = k as u32;
                k = k.saturating_sub(1);
            }
        }
        drop(class);

        Self {
            genome,
            n,
            order,
            class_start,
            lcp,
        }
    }

    pub fn genome(&self) -> &DiploidGenome {
        self.genome
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hap(&self, u: u32) -> u8 {
        (u as usize / self.n) as u8
    }

    pub fn pos(&self, u: u32) -> usize {
        u as usize % self.n
    }

    /// Symbol just before the rotation's start.
    pub fn left_flank(&self, u: u32) -> u8 {
        let pos = self.pos(u);
        self.genome.hap(self.hap(u) as usize).at(pos + self.n - 1)
    }

    pub fn n_classes(&self) -> usize {
        self.lcp.len()
    }

    /// Visits every internal node with depth at least `min_depth` (and at
    /// least 1), children before parents.
    pub fn for_each_node<F: FnMut(&Node<'_>)>(&self, min_depth: usize, mut visit: F) {
        let min_depth = min_depth.max(1);
        let c = self.n_classes();
        // (depth, left class, child class boundaries)
        struct Open {
            depth: usize,
            lb: usize,
            child_ends: Vec<(usize, usize)>,
        }
        let mut stack = vec![Open {
            depth: 0,
            lb: 0,
            child_ends: Vec::new(),
        }];
        let mut bounds = Vec::new();
        let mut next_id = 0u32;
        for i in 1..=c {
            let l: isize = if i < c { self.lcp[i] as isize } else { -1 };
            let mut lb = i - 1;
            let mut last: Option<(usize, usize)> = None;
            while l < stack.last().map(|o| o.depth as isize).unwrap_or(-1) {
                let open = stack.pop().expect("non-empty stack");
                let rb = i - 1;
                if open.depth >= min_depth {
                    bounds.clear();
                    let base = self.class_start[open.lb] as usize;
                    let mut cls = open.lb;
                    let mut children = open.child_ends.iter().peekable();
                    while cls <= rb {
                        bounds.push(self.class_start[cls] as usize - base);
                        match children.peek() {
                            Some(&&(clb, crb)) if clb == cls => {
                                cls = crb + 1;
                                children.next();
                            }
                            _ => cls += 1,
                        }
                    }
                    bounds.push(self.class_start[rb + 1] as usize - base);
                    let rotations = &self.order[base..self.class_start[rb + 1] as usize];
                    visit(&Node {
                        id: next_id,
                        depth: open.depth,
                        rotations,
                        bounds: &bounds,
                    });
                    next_id += 1;
                }
                lb = open.lb;
                let interval = (open.lb, rb);
                match stack.last_mut() {
                    Some(top) if l <= top.depth as isize => {
                        top.child_ends.push(interval);
                        last = None;
                    }
                    _ => last = Some(interval),
                }
            }
            if i < c && l > stack.last().map(|o| o.depth as isize).unwrap_or(-1) {
                stack.push(Open {
                    depth: l as usize,
                    lb,
                    child_ends: last.into_iter().collect(),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(g: &DiploidGenome, u: usize) -> Vec<u8> {
        let n = g.len();
        g.hap(u / n).window(u % n, n).to_vec()
    }

    fn lce(g: &DiploidGenome, u: usize, v: usize) -> usize {
        let (a, b) = (rotation(g, u), rotation(g, v));
        a.iter().zip(&b).take_while(|(x, y)| x == y).count()
    }

    fn check_sorted(g: &DiploidGenome) {
        let idx = RotationIndex::new(g);
        let m = 2 * g.len();
        let mut expected: Vec<usize> = (0..m).collect();
        expected.sort_by(|&a, &b| rotation(g, a).cmp(&rotation(g, b)));
        let got: Vec<Vec<u8>> = idx.order.iter().map(|&u| rotation(g, u as usize)).collect();
        let want: Vec<Vec<u8>> = expected.iter().map(|&u| rotation(g, u)).collect();
        assert_eq!(got, want);
        for c in 1..idx.n_classes() {
            let a = idx.order[idx.class_start[c - 1] as usize] as usize;
            let b = idx.order[idx.class_start[c] as usize] as usize;
            assert_eq!(idx.lcp[c] as usize, lce(g, a, b));
        }
    }

    #[test]
    fn sorts_rotations() {
        check_sorted(&DiploidGenome::from_strs("ACGTTGCA", "ACGATGCA").unwrap());
        check_sorted(&DiploidGenome::from_strs("ACACACAC", "ACACACAC").unwrap());
        check_sorted(&DiploidGenome::from_strs("AAAAAAAG", "AAAAAAAA").unwrap());
        check_sorted(&DiploidGenome::from_strs("A", "C").unwrap());
        check_sorted(&DiploidGenome::from_strs("GATTACAGATTACA", "GATTACAGATTTCA").unwrap());
    }

    #[test]
    fn every_pair_meets_at_its_lce() {
        let g = DiploidGenome::from_strs("ACGTTGCAACGTAAGCT", "ACGATGCAACGTTAGCT").unwrap();
        let idx = RotationIndex::new(&g);
        let m = 2 * g.len();
        let mut met = vec![vec![None; m]; m];
        idx.for_each_node(1, |node| {
            for a in 0..node.n_children() {
                for b in a + 1..node.n_children() {
                    for &u in node.child(a) {
                        for &v in node.child(b) {
                            met[u as usize][v as usize] = Some(node.depth);
                            met[v as usize][u as usize] = Some(node.depth);
                        }
                    }
                }
            }
        });
        for u in 0..m {
            for v in 0..m {
                if u == v {
                    continue;
                }
                let l = lce(&g, u, v);
                let want = if l == 0 || l >= g.len() {
                    None
                } else {
                    Some(l)
                };
                assert_eq!(met[u][v], want, "u={u} v={v}");
            }
        }
    }
}
