//! Proper edge colouring of multigraphs with at most `Δ + μ` colours.
//!
//! Edges are coloured one at a time. When the endpoints of the next edge `xy`
//! share no free colour, a fan of distinct neighbours `y = y_1, y_2, ...` of `x`
//! is grown, where the edge `x y_k` carries a colour missing at an earlier fan
//! vertex (its parent). If some fan vertex shares a free colour with `x`, the
//! colours are shifted back along its parent chain. Otherwise a counting
//! argument gives two fan vertices `y_i, y_j` (with `y_i` the earliest) missing
//! a common colour `γ`; swapping an `α/γ` alternating path (`α` free at `x`)
//! that avoids `x` frees `α` at `y_i` or `y_j`, and the shift applies.

/// One colour per edge, in `0..Δ+μ`.
pub fn color_multigraph(vertex_count: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut deg = vec![0usize; vertex_count];
    let mut mult = std::collections::BTreeMap::new();
    for &(u, v) in edges {
        assert!(u != v && u < vertex_count && v < vertex_count, "invalid edge ({u},{v})");
        deg[u] += 1;
        deg[v] += 1;
        *mult.entry((u.min(v), u.max(v))).or_insert(0usize) += 1;
    }
    let palette = deg.iter().max().copied().unwrap_or(0) + mult.values().max().copied().unwrap_or(0);
    let mut c = Colouring {
        ends: edges.to_vec(),
        color: vec![None; edges.len()],
        at: vec![vec![None; palette]; vertex_count],
        palette,
    };
    for e in 0..edges.len() {
        c.extend(e);
    }
    c.color.into_iter().map(|c| c.expect("every edge coloured")).collect()
}

struct Colouring {
    ends: Vec<(usize, usize)>,
    color: Vec<Option<usize>>,
    /// `at[v][c]`: the edge of colour `c` at `v`.
    at: Vec<Vec<Option<usize>>>,
    palette: usize,
}

impl Colouring {
    fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    fn missing(&self, v: usize, c: usize) -> bool {
        self.at[v][c].is_none()
    }

    fn first_missing(&self, v: usize) -> Option<usize> {
        (0..self.palette).find(|&c| self.missing(v, c))
    }

    fn set(&mut self, e: usize, c: usize) {
        let (a, b) = self.ends[e];
        debug_assert!(self.missing(a, c) && self.missing(b, c));
        self.at[a][c] = Some(e);
        self.at[b][c] = Some(e);
        self.color[e] = Some(c);
    }

    fn clear(&mut self, e: usize) -> Option<usize> {
        let c = self.color[e].take()?;
        let (a, b) = self.ends[e];
        self.at[a][c] = None;
        self.at[b][c] = None;
        Some(c)
    }

    /// The maximal alternating path of colours `first, second, first, ...`
    /// starting at `v`, as a list of edges.
    fn alternating_path(&self, v: usize, first: usize, second: usize) -> (Vec<usize>, usize) {
        let mut path = Vec::new();
        let mut cur = v;
        let mut want = first;
        while let Some(e) = self.at[cur][want] {
            path.push(e);
            cur = self.other(e, cur);
            want = if want == first { second } else { first };
        }
        (path, cur)
    }

    fn swap_path(&mut self, path: &[usize], a: usize, b: usize) {
        let old: Vec<usize> = path.iter().map(|&e| self.clear(e).expect("path edges are coloured")).collect();
        for (&e, c) in path.iter().zip(old) {
            self.set(e, if c == a { b } else { a });
        }
    }

    /// Gives `fan_edges[k]` colour `alpha` and moves every freed colour one
    /// step up the parent chain until the uncoloured first fan edge is reached.
    fn shift(&mut self, fan_edges: &[usize], parent: &[usize], mut k: usize, alpha: usize) {
        let mut new = alpha;
        loop {
            let old = self.clear(fan_edges[k]);
            self.set(fan_edges[k], new);
            match old {
                None => return,
                Some(c) => {
                    new = c;
                    k = parent[k];
                }
            }
        }
    }

    fn extend(&mut self, e: usize) {
        let (x, y) = self.ends[e];
        if let Some(c) = (0..self.palette).find(|&c| self.missing(x, c) && self.missing(y, c)) {
            self.set(e, c);
            return;
        }
        let mut fan_vertices = vec![y];
        let mut fan_edges = vec![e];
        let mut parent = vec![usize::MAX];
        let mut checked = 0;
        loop {
            while checked < fan_vertices.len() {
                let yk = fan_vertices[checked];
                if let Some(alpha) = (0..self.palette).find(|&c| self.missing(x, c) && self.missing(yk, c)) {
                    self.shift(&fan_edges, &parent, checked, alpha);
                    return;
                }
                checked += 1;
            }
            // Grow: an edge at x whose colour is missing at some fan vertex and
            // whose far end is new.
            let mut grown = false;
            for c in 0..self.palette {
                let Some(f) = self.at[x][c] else { continue };
                let z = self.other(f, x);
                if fan_vertices.contains(&z) {
                    continue;
                }
                if let Some(l) = fan_vertices.iter().position(|&w| self.missing(w, c)) {
                    fan_vertices.push(z);
                    fan_edges.push(f);
                    parent.push(l);
                    grown = true;
                    break;
                }
            }
            if !grown {
                break;
            }
        }
        let alpha = self.first_missing(x).expect("x misses a colour");
        let mut pick = None;
        'outer: for gamma in 0..self.palette {
            let holders: Vec<usize> = (0..fan_vertices.len())
                .filter(|&k| self.missing(fan_vertices[k], gamma))
                .collect();
            if holders.len() >= 2 {
                pick = Some((gamma, holders[0], holders[1]));
                break 'outer;
            }
        }
        let (gamma, i, j) = pick.expect("a maximal fan has two vertices missing a common colour");
        let (path_i, end_i) = self.alternating_path(fan_vertices[i], alpha, gamma);
        let target = if end_i == x {
            let (path_j, _) = self.alternating_path(fan_vertices[j], alpha, gamma);
            self.swap_path(&path_j, alpha, gamma);
            j
        } else {
            self.swap_path(&path_i, alpha, gamma);
            i
        };
        debug_assert!(self.missing(fan_vertices[target], alpha) && self.missing(x, alpha));
        self.shift(&fan_edges, &parent, target, alpha);
    }
}

/// Groups edge indices by colour; every group is a matching.
pub fn color_classes(vertex_count: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let colors = color_multigraph(vertex_count, edges);
    let k = colors.iter().max().map_or(0, |&c| c + 1);
    let mut classes = vec![Vec::new(); k];
    for (e, &c) in colors.iter().enumerate() {
        classes[c].push(e);
    }
    classes
}
