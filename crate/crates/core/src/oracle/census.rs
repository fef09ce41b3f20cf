//! Weighted counts of hypermap families over all planar rooted maps up to a
//! given number of edges.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::maps::{alpha, planar_maps, RootedMap};
use crate::algebra::{MSeries, VarSet};
use crate::gf::CylinderKind;
use crate::par;
use crate::slices::Color;

/// Sparse integer polynomial keyed by exponent vectors of the census
/// variables `t, tw1..twD, tb1..tbD`.
pub type Poly = BTreeMap<Vec<u16>, BigInt>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Disk(Color, u32),
    PointedDisk(Color, u32),
    Cylinder(CylinderKind, u32, u32),
    /// Contribution of ccw-girth `h`.
    CylinderGirth(CylinderKind, u32, u32, u32),
    Dobrushin(u32, u32),
    Blob(u32, u32),
}

/// Tables of weighted counts for every map with at most `e_max` edges.
#[derive(Clone, Debug)]
pub struct Census {
    pub e_max: usize,
    pub vars: Arc<VarSet>,
    pub tables: BTreeMap<Family, Poly>,
    /// Cylinders (white outer, black central) where "no clockwise separating
    /// cycle" and "boundaries share an edge" disagree. Expected empty.
    pub one_way_violations: usize,
}

/// Map-level data shared by all colorings.
struct Shape {
    map: RootedMap,
    vertex_of: Vec<usize>,
    vertices: usize,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
}

impl Shape {
    fn new(map: RootedMap) -> Shape {
        let (vertex_of, verts) = map.vertices();
        let (face_of, faces) = map.faces();
        Shape { vertices: verts.len(), map, vertex_of, face_of, faces }
    }

    fn deg(&self, f: usize) -> usize {
        self.faces[f].len()
    }

    fn adjacent(&self, f: usize, g: usize) -> bool {
        self.faces[f].iter().any(|&d| self.face_of[alpha(d)] == g)
    }

    /// Proper 2-coloring with the root face white, if any.
    fn coloring(&self) -> Option<Vec<Color>> {
        let mut col: Vec<Option<Color>> = vec![None; self.faces.len()];
        col[0] = Some(Color::White);
        let mut stack = vec![0];
        while let Some(f) = stack.pop() {
            let c = col[f].expect("visited");
            for &d in &self.faces[f] {
                let g = self.face_of[alpha(d)];
                match col[g] {
                    None => {
                        col[g] = Some(c.swap());
                        stack.push(g);
                    }
                    Some(cg) if cg == c => return None,
                    Some(_) => {}
                }
            }
        }
        col.into_iter().collect()
    }

    /// Simple directed cycles for the orientation where a dart is forward
    /// when its (right) face is white, each with its length and the set of
    /// faces on its left.
    fn cycles(&self, col: &[Color]) -> Vec<(usize, u64)> {
        let n = self.map.darts();
        let forward: Vec<usize> = (0..n).filter(|&d| col[self.face_of[d]] == Color::White).collect();
        let mut out_darts: Vec<Vec<usize>> = vec![Vec::new(); self.vertices];
        for &d in &forward {
            out_darts[self.vertex_of[d]].push(d);
        }
        let mut cycles = Vec::new();
        // Each cycle is found once, from its smallest vertex.
        for start in 0..self.vertices {
            let mut path = Vec::new();
            let mut on_path = vec![false; self.vertices];
            on_path[start] = true;
            self.extend(start, start, &out_darts, &mut on_path, &mut path, &mut cycles);
        }
        cycles.into_iter().map(|c: Vec<usize>| (c.len(), self.left_faces(&c))).collect()
    }

    fn extend(
        &self,
        start: usize,
        v: usize,
        out: &[Vec<usize>],
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        for &d in &out[v] {
            let w = self.vertex_of[alpha(d)];
            if w == start {
                let mut c = path.clone();
                c.push(d);
                found.push(c);
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(d);
                self.extend(start, w, out, on_path, path, found);
                path.pop();
                on_path[w] = false;
            }
        }
    }

    /// Faces reachable from the left of the cycle without crossing it.
    fn left_faces(&self, cycle: &[usize]) -> u64 {
        let cut: Vec<usize> = cycle.iter().map(|&d| d / 2).collect();
        let mut seen = 1u64 << self.face_of[alpha(cycle[0])];
        let mut stack = vec![self.face_of[alpha(cycle[0])]];
        while let Some(f) = stack.pop() {
            for &d in &self.faces[f] {
                if cut.contains(&(d / 2)) {
                    continue;
                }
                let g = self.face_of[alpha(d)];
                if seen & (1 << g) == 0 {
                    seen |= 1 << g;
                    stack.push(g);
                }
            }
        }
        seen
    }
}

struct Acc<'a> {
    dmax: usize,
    tables: &'a mut BTreeMap<Family, Poly>,
}

impl Acc<'_> {
    fn add(&mut self, fam: Family, mono: &[u16], mult: u64) {
        let slot = self.tables.entry(fam).or_default().entry(mono.to_vec()).or_insert_with(|| BigInt::from(0));
        *slot += mult;
    }

    /// Exponent vector of `t^v` times the inner faces (all but `skip`).
    fn mono(&self, shape: &Shape, col: &[Color], v: usize, skip: &[usize]) -> Vec<u16> {
        let mut e = vec![0u16; 1 + 2 * self.dmax];
        e[0] = v as u16;
        for (f, c) in col.iter().enumerate().take(shape.faces.len()) {
            if !skip.contains(&f) {
                let d = shape.deg(f);
                let idx = match c {
                    Color::White => d,
                    Color::Black => self.dmax + d,
                };
                e[idx] += 1;
            }
        }
        e
    }
}

impl Census {
    /// Counts every family over planar rooted maps with at most `e_max`
    /// edges; monomials are recorded with face degrees up to `2 e_max`.
    pub fn new(e_max: usize) -> Census {
        let dmax = (2 * e_max).max(1);
        let vars = VarSet::hypermap(dmax, dmax, (2 * e_max + 2) as u32);
        let per_e = par::map_range(e_max + 1, |e| {
            let mut tables = BTreeMap::new();
            let mut violations = 0;
            let mut acc = Acc { dmax, tables: &mut tables };
            for m in planar_maps(e) {
                violations += count_map(&mut acc, Shape::new(m));
            }
            (tables, violations)
        });
        let mut tables: BTreeMap<Family, Poly> = BTreeMap::new();
        let mut one_way_violations = 0;
        for (t, v) in per_e {
            one_way_violations += v;
            for (fam, poly) in t {
                let slot = tables.entry(fam).or_default();
                for (m, c) in poly {
                    *slot.entry(m).or_insert_with(|| BigInt::from(0)) += c;
                }
            }
        }
        Census { e_max, vars, tables, one_way_violations }
    }

    pub fn get(&self, fam: Family) -> MSeries {
        let terms = self
            .tables
            .get(&fam)
            .into_iter()
            .flatten()
            .map(|(e, c)| (e.clone(), BigRational::from_integer(c.clone())));
        MSeries::from_terms(&self.vars, terms)
    }
}

fn count_map(acc: &mut Acc, shape: Shape) -> usize {
    let mut violations = 0;
    if shape.map.edges() == 0 {
        let t = vec![1u16].into_iter().chain(std::iter::repeat_n(0, 2 * acc.dmax)).collect::<Vec<_>>();
        let one = vec![0u16; 1 + 2 * acc.dmax];
        for c in [Color::White, Color::Black] {
            acc.add(Family::Disk(c, 0), &t, 1);
            acc.add(Family::PointedDisk(c, 0), &one, 1);
        }
        acc.add(Family::Dobrushin(0, 0), &t, 1);
        acc.add(Family::Blob(0, 0), &t, 1);
        return 0;
    }
    let v = shape.vertices;
    if let Some(white_root) = shape.coloring() {
        let black_root: Vec<Color> = white_root.iter().map(|c| c.swap()).collect();
        for col in [white_root, black_root] {
            let outer = col[0];
            let p = shape.deg(0) as u32;
            let disk = acc.mono(&shape, &col, v, &[0]);
            acc.add(Family::Disk(outer, p), &disk, 1);
            let pointed = acc.mono(&shape, &col, v - 1, &[0]);
            acc.add(Family::PointedDisk(outer, p), &pointed, v as u64);
            let cycles = shape.cycles(&col);
            for f2 in 1..shape.faces.len() {
                let q = shape.deg(f2) as u32;
                let mono = acc.mono(&shape, &col, v, &[0, f2]);
                let ccw = cycles
                    .iter()
                    .filter(|(_, left)| left & (1 << f2) != 0 && left & 1 == 0)
                    .map(|(len, _)| *len as u32)
                    .min();
                let cw = cycles.iter().any(|(_, left)| left & 1 != 0 && left & (1 << f2) == 0);
                let kind = match (outer, col[f2]) {
                    (Color::White, Color::White) => CylinderKind::Ww,
                    (Color::Black, Color::Black) => CylinderKind::Bb,
                    (Color::White, Color::Black) => CylinderKind::Wb,
                    (Color::Black, Color::White) => CylinderKind::TwoWayBw,
                };
                if kind == CylinderKind::Wb {
                    if !cw {
                        acc.add(Family::Cylinder(CylinderKind::OneWay, p, q), &mono, q as u64);
                    }
                    if cw == shape.adjacent(0, f2) {
                        violations += 1;
                    }
                }
                match ccw {
                    Some(h) => {
                        acc.add(Family::Cylinder(kind, p, q), &mono, q as u64);
                        acc.add(Family::CylinderGirth(kind, p, q, h), &mono, q as u64);
                    }
                    // Only black outer and white central may lack a ccw cycle.
                    None if kind != CylinderKind::TwoWayBw => violations += 1,
                    None => {}
                }
            }
        }
    }
    count_dobrushin(acc, &shape);
    violations
}

/// Dobrushin boundaries: the root face contour `d_0, d_1, ..` splits into
/// `p` darts whose edges are oriented along the contour (boundary acting
/// white) followed by `q` darts oriented against it.
fn count_dobrushin(acc: &mut Acc, shape: &Shape) {
    let contour = &shape.faces[0];
    let len = contour.len();
    let nf = shape.faces.len();
    let index_of = |d: usize| contour.iter().position(|&c| c == d);
    let bridgeless = (0..shape.map.edges()).all(|e| !shape.map.is_bridge(2 * e));
    for p in 0..=len {
        let q = len - p;
        // Required inner colors from the boundary, and consistency of edges
        // with the boundary on both sides.
        let mut need: Vec<Option<Color>> = vec![None; nf];
        let mut ok = true;
        for (i, &d) in contour.iter().enumerate() {
            let g = shape.face_of[alpha(d)];
            let want = if i < p { Color::Black } else { Color::White };
            if g == 0 {
                let j = index_of(alpha(d)).expect("both sides on the boundary");
                ok &= (i < p) != (j < p);
            } else if need[g].is_some_and(|c| c != want) {
                ok = false;
            } else {
                need[g] = Some(want);
            }
        }
        if !ok {
            continue;
        }
        for mask in 0u64..(1 << (nf - 1)) {
            let col: Vec<Color> = (0..nf)
                .map(|f| if f > 0 && mask & (1 << (f - 1)) != 0 { Color::Black } else { Color::White })
                .collect();
            if (1..nf).any(|f| need[f].is_some_and(|c| c != col[f])) {
                continue;
            }
            let proper = (0..shape.map.darts()).all(|d| {
                let (f, g) = (shape.face_of[d], shape.face_of[alpha(d)]);
                f == 0 || g == 0 || col[f] != col[g]
            });
            if !proper {
                continue;
            }
            let mono = acc.mono(shape, &col, shape.vertices, &[0]);
            acc.add(Family::Dobrushin(p as u32, q as u32), &mono, 1);
            if bridgeless {
                acc.add(Family::Blob(p as u32, q as u32), &mono, 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(c: &Census, fam: Family) -> BigInt {
        c.tables.get(&fam).into_iter().flatten().map(|(_, v)| v.clone()).sum()
    }

    #[test]
    fn one_edge_families() {
        let c = Census::new(1);
        // The loop is the only colorable map with one edge.
        assert_eq!(total(&c, Family::Disk(Color::White, 1)), 1.into());
        assert_eq!(total(&c, Family::Disk(Color::Black, 1)), 1.into());
        assert_eq!(c.get(Family::Disk(Color::White, 0)), MSeries::var(&c.vars, 0));
        assert_eq!(c.one_way_violations, 0);
    }

    #[test]
    fn characterizations_of_one_way_cylinders_agree() {
        assert_eq!(Census::new(4).one_way_violations, 0);
    }
}
