//! Rooted combinatorial maps as rotation systems on darts `0..2E`, with the
//! edge involution `α(d) = d ^ 1` and the root dart `0`.

use std::collections::BTreeSet;

use crate::par;

/// A rooted map: `sigma` rotates darts around their vertex, faces are the
/// orbits of `φ = σ∘α` and the face of a dart lies on its right. The map
/// with no edges is the single vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedMap {
    pub sigma: Vec<usize>,
}

pub fn alpha(d: usize) -> usize {
    d ^ 1
}

fn orbits(n: usize, f: impl Fn(usize) -> usize) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut of = vec![usize::MAX; n];
    let mut cycles = Vec::new();
    for s in 0..n {
        if of[s] != usize::MAX {
            continue;
        }
        let mut cyc = Vec::new();
        let mut d = s;
        while of[d] == usize::MAX {
            of[d] = cycles.len();
            cyc.push(d);
            d = f(d);
        }
        cycles.push(cyc);
    }
    (of, cycles)
}

impl RootedMap {
    pub fn edges(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn phi(&self, d: usize) -> usize {
        self.sigma[alpha(d)]
    }

    /// Vertex index of every dart and the vertex rotations.
    pub fn vertices(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        orbits(self.darts(), |d| self.sigma[d])
    }

    /// Face index of every dart and the face contours; the root face has
    /// index 0 and its contour starts at the root dart.
    pub fn faces(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        orbits(self.darts(), |d| self.phi(d))
    }

    pub fn vertex_count(&self) -> usize {
        if self.sigma.is_empty() {
            1
        } else {
            self.vertices().1.len()
        }
    }

    pub fn face_count(&self) -> usize {
        if self.sigma.is_empty() {
            1
        } else {
            self.faces().1.len()
        }
    }

    pub fn is_planar(&self) -> bool {
        self.vertex_count() + self.face_count() == self.edges() + 2
    }

    /// Relabels so that `root` becomes dart 0, by the scan used in
    /// [`rooted_maps`]: darts are processed in label order and the image of
    /// each under `σ`, when new, receives the next free pair of labels.
    pub fn canonical(&self, root: usize) -> RootedMap {
        let n = self.darts();
        let mut label = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        label[root] = 0;
        label[alpha(root)] = 1;
        order.push(root);
        order.push(alpha(root));
        let mut sigma = vec![0; n];
        let mut i = 0;
        while i < order.len() {
            let s = self.sigma[order[i]];
            if label[s] == usize::MAX {
                label[s] = order.len();
                label[alpha(s)] = order.len() + 1;
                order.push(s);
                order.push(alpha(s));
            }
            sigma[i] = label[s];
            i += 1;
        }
        assert_eq!(order.len(), n, "map is not connected");
        RootedMap { sigma }
    }

    /// Connectivity of the underlying graph with one edge removed.
    pub fn is_bridge(&self, d: usize) -> bool {
        let (vof, verts) = self.vertices();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let skip = d / 2;
        for e in 0..self.edges() {
            if e == skip {
                continue;
            }
            let (a, b) = (find(&mut parent, vof[2 * e]), find(&mut parent, vof[2 * e + 1]));
            parent[a] = b;
        }
        let r = find(&mut parent, 0);
        (0..verts.len()).any(|v| find(&mut parent, v) != r)
    }
}

/// All rooted maps with `e` edges, of every genus, each exactly once in
/// canonical labelling.
pub fn rooted_maps(e: usize) -> Vec<RootedMap> {
    if e == 0 {
        return vec![RootedMap { sigma: Vec::new() }];
    }
    let n = 2 * e;
    // Branch on the image of dart 0, then of dart 1, sequentially below.
    let firsts: Vec<usize> = if n > 2 { vec![0, 1, 2] } else { vec![0, 1] };
    let parts = par::map(&firsts, |&s0| {
        let mut st = Gen { n, sigma: vec![usize::MAX; n], used: vec![false; n], out: Vec::new() };
        st.sigma[0] = s0;
        st.used[s0] = true;
        st.rec(1, if s0 == 2 { 4 } else { 2 });
        st.out
    });
    parts.into_iter().flatten().collect()
}

struct Gen {
    n: usize,
    sigma: Vec<usize>,
    used: Vec<bool>,
    out: Vec<RootedMap>,
}

impl Gen {
    fn rec(&mut self, i: usize, next: usize) {
        if i == self.n {
            self.out.push(RootedMap { sigma: self.sigma.clone() });
            return;
        }
        if i >= next {
            // No labelled dart left to scan: the map would be disconnected.
            return;
        }
        for j in 0..next {
            if !self.used[j] {
                self.used[j] = true;
                self.sigma[i] = j;
                self.rec(i + 1, next);
                self.used[j] = false;
            }
        }
        if next < self.n {
            self.used[next] = true;
            self.sigma[i] = next;
            self.rec(i + 1, next + 2);
            self.used[next] = false;
        }
    }
}

pub fn planar_maps(e: usize) -> Vec<RootedMap> {
    rooted_maps(e).into_iter().filter(RootedMap::is_planar).collect()
}

/// Rooted maps with `e` edges built by adding one edge at a time (a pendant
/// edge at a corner, or a chord between two corners), deduplicated by
/// canonical code. Independent of the scan in [`rooted_maps`].
pub fn rooted_maps_by_growth(e: usize) -> BTreeSet<RootedMap> {
    if e == 0 {
        return [RootedMap { sigma: Vec::new() }].into();
    }
    let mut level: BTreeSet<RootedMap> = [RootedMap { sigma: vec![0, 1] }, RootedMap { sigma: vec![1, 0] }].into();
    for _ in 1..e {
        let mut next = BTreeSet::new();
        for m in &level {
            for grown in grow(m) {
                next.insert(unrooted_code(&grown));
            }
        }
        level = next;
    }
    level.iter().flat_map(|m| (0..m.darts()).map(move |r| m.canonical(r))).collect()
}

fn unrooted_code(m: &RootedMap) -> RootedMap {
    (0..m.darts()).map(|r| m.canonical(r)).min().expect("nonempty map")
}

fn grow(m: &RootedMap) -> Vec<RootedMap> {
    let n = m.darts();
    let (x, y) = (n, n + 1);
    let mut out = Vec::new();
    for d1 in 0..n {
        let mut s = m.sigma.clone();
        s.extend([0, 0]);
        s[x] = s[d1];
        s[d1] = x;
        let mut leaf = s.clone();
        leaf[y] = y;
        out.push(RootedMap { sigma: leaf });
        for d2 in 0..=x {
            let mut c = s.clone();
            c[y] = c[d2];
            c[d2] = y;
            out.push(RootedMap { sigma: c });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_of_rooted_maps() {
        let all: Vec<usize> = (0..=5).map(|e| rooted_maps(e).len()).collect();
        assert_eq!(all, [1, 2, 10, 74, 706, 8162]);
        let planar: Vec<usize> = (0..=5).map(|e| planar_maps(e).len()).collect();
        assert_eq!(planar, [1, 2, 9, 54, 378, 2916]);
    }

    #[test]
    fn generators_agree() {
        for e in 0..=4 {
            let a: BTreeSet<RootedMap> = rooted_maps(e).into_iter().collect();
            assert_eq!(a, rooted_maps_by_growth(e), "e={e}");
        }
    }

    #[test]
    fn scan_output_is_canonical() {
        for m in rooted_maps(3) {
            assert_eq!(m.canonical(0), m);
        }
    }

    #[test]
    fn bridges_and_loops() {
        let bridge = RootedMap { sigma: vec![0, 1] };
        let lp = RootedMap { sigma: vec![1, 0] };
        assert!(bridge.is_bridge(0));
        assert!(!lp.is_bridge(0));
        assert_eq!(bridge.face_count(), 1);
        assert_eq!(lp.face_count(), 2);
    }
}
