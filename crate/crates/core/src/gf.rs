//! Fixed-perimeter generating functions as coefficient extractions from powers
//! of `x(z)` and `y(z)`.
//!
//! All sums over `h` run over the actual support of the Laurent powers
//! involved, so they are finite and exact.

use serde::{Deserialize, Serialize};

use crate::algebra::{frac, BiTail, LaurentPoly, MSeries};
use crate::report::{compare_bitails, compare_series, Check, Mismatch, SuiteReport};
use crate::slices::{Color, SliceSolution};
use crate::walks::{walk_count, walk_count_dp, StepWeights};
use crate::{par, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Disk,
    PointedDisk,
    Trumpet,
    Cornet,
    Cylinder,
    OneWayCylinder,
    Dobrushin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub kind: BoundaryKind,
    pub colors: Vec<Color>,
    pub degrees: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub girth: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GFResult {
    pub spec: BoundarySpec,
    pub route: String,
    pub value: MSeries,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CylinderKind {
    /// `F°°`: both boundaries white.
    Ww,
    /// `F••`: both boundaries black.
    Bb,
    /// `F°•`: outer white, central black.
    Wb,
    /// `F̂°•`: white outer, black central, no clockwise separating cycle.
    OneWay,
    /// `F̃•°`: black outer, white central, finite ccw-girth.
    TwoWayBw,
}

impl CylinderKind {
    pub const ALL: [CylinderKind; 5] =
        [CylinderKind::Ww, CylinderKind::Bb, CylinderKind::Wb, CylinderKind::OneWay, CylinderKind::TwoWayBw];

    /// Colors of the outer and central boundaries.
    pub fn colors(self) -> (Color, Color) {
        match self {
            CylinderKind::Ww => (Color::White, Color::White),
            CylinderKind::Bb => (Color::Black, Color::Black),
            CylinderKind::Wb | CylinderKind::OneWay => (Color::White, Color::Black),
            CylinderKind::TwoWayBw => (Color::Black, Color::White),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CylinderKind::Ww => "ww",
            CylinderKind::Bb => "bb",
            CylinderKind::Wb => "wb",
            CylinderKind::OneWay => "one_way",
            CylinderKind::TwoWayBw => "two_way_bw",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrumpetKind {
    Trumpet,
    Cornet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiskRoute {
    /// Weighted sum against the slices of the other color.
    Compact,
    /// Inflated corner minus cylinders with a collapsed inner face.
    Expanded,
    /// Pointed disks with nonnegative boundary labels, by direct walk counts.
    AppendixB,
}

impl DiskRoute {
    pub const ALL: [DiskRoute; 3] = [DiskRoute::Compact, DiskRoute::Expanded, DiskRoute::AppendixB];

    pub fn name(self) -> &'static str {
        match self {
            DiskRoute::Compact => "compact",
            DiskRoute::Expanded => "expanded",
            DiskRoute::AppendixB => "appendix_b",
        }
    }
}

/// A solution together with the powers of `x` and `y` up to a fixed exponent.
pub struct Gf<'a> {
    sol: &'a SliceSolution,
    xp: Vec<LaurentPoly>,
    yp: Vec<LaurentPoly>,
}

/// `Σ_{h ∈ range} h [z^h]A [z^{-h}]B`, over the support of `A`.
fn pairing(a: &LaurentPoly, b: &LaurentPoly, keep: impl Fn(i32) -> bool) -> MSeries {
    let mut acc = MSeries::zero(a.vars());
    for (h, c) in a.iter() {
        if h == 0 || !keep(h) {
            continue;
        }
        if let Some(d) = b.coeff_ref(-h) {
            acc += &(c * d).scale_int(h as i64);
        }
    }
    acc
}

impl<'a> Gf<'a> {
    /// Caches `x^0..=x^m` and `y^0..=y^m`.
    pub fn new(sol: &'a SliceSolution, max_power: u32) -> Gf<'a> {
        let (xp, yp) = par::join(|| sol.x().powers(max_power), || sol.y().powers(max_power));
        Gf { sol, xp, yp }
    }

    /// Power cache large enough for disks up to `p_max` and cylinders with
    /// degrees up to `p_max + 1`.
    pub fn for_perimeters(sol: &'a SliceSolution, p_max: u32) -> Gf<'a> {
        let dmax = sol.bounds().white.max(sol.bounds().black) as u32;
        Gf::new(sol, (p_max + 1).max(dmax))
    }

    pub fn sol(&self) -> &SliceSolution {
        self.sol
    }

    pub fn max_power(&self) -> u32 {
        self.xp.len() as u32 - 1
    }

    pub fn pow(&self, color: Color, p: u32) -> &LaurentPoly {
        let cache = match color {
            Color::White => &self.xp,
            Color::Black => &self.yp,
        };
        cache.get(p as usize).unwrap_or_else(|| panic!("power {p} beyond cache {}", cache.len() - 1))
    }

    fn zero(&self) -> MSeries {
        MSeries::zero(self.sol.vars())
    }

    /// `P°_{p,h} = [z^{-h}]x^p`, `P•_{p,h} = [z^h]y^p`.
    pub fn walks(&self, color: Color, p: u32, h: i32) -> MSeries {
        let e = match color {
            Color::White => -h,
            Color::Black => h,
        };
        self.pow(color, p).coeff(e)
    }

    /// `∂F_p/∂t = [z^0] x^p` (white) or `[z^0] y^p` (black).
    pub fn pointed_disk(&self, color: Color, p: u32) -> MSeries {
        self.pow(color, p).coeff(0)
    }

    /// Trumpets `[z^h]`, cornets `[z^{-h}]` of the `p`-th power.
    pub fn trumpet_cornet(&self, kind: TrumpetKind, color: Color, p: u32, h: u32) -> MSeries {
        let e = match kind {
            TrumpetKind::Trumpet => h as i32,
            TrumpetKind::Cornet => -(h as i32),
        };
        self.pow(color, p).coeff(e)
    }

    pub fn cylinder(&self, kind: CylinderKind, p: u32, q: u32) -> MSeries {
        let (outer, central) = kind.colors();
        let (a, b) = (self.pow(outer, p), self.pow(central, q));
        match kind {
            CylinderKind::OneWay => pairing(a, b, |_| true),
            _ => pairing(a, b, |h| h >= 1),
        }
    }

    /// Contribution of ccw-girth `h` to a two-boundary family, `h ≥ 1`.
    pub fn cylinder_girth_term(&self, kind: CylinderKind, p: u32, q: u32, h: u32) -> MSeries {
        let (outer, central) = kind.colors();
        let h = h as i32;
        (&self.pow(outer, p).coeff(h) * &self.pow(central, q).coeff(-h)).scale_int(h as i64)
    }

    pub fn disk(&self, color: Color, p: u32, route: DiskRoute) -> MSeries {
        let sol = self.sol;
        let inv = frac(1, p as i64 + 1);
        match (route, color) {
            (DiskRoute::Compact, Color::White) => {
                let xp = self.pow(Color::White, p + 1);
                let mut acc = self.zero();
                for (h, c) in xp.iter() {
                    acc += &(&sol.b(-h) * c).scale_int(h as i64);
                }
                acc.scale(&inv)
            }
            (DiskRoute::Compact, Color::Black) => {
                let yp = self.pow(Color::Black, p + 1);
                let mut acc = self.zero();
                for (e, c) in yp.iter() {
                    let h = -e;
                    acc += &(&sol.a(-h) * c).scale_int(h as i64);
                }
                acc.scale(&inv)
            }
            (DiskRoute::Expanded, _) => {
                let big = self.pow(color, p + 1);
                let mut acc = match color {
                    Color::White => big.coeff(1),
                    Color::Black => &sol.a(-1) * &big.coeff(-1),
                };
                for d in 2..=sol.max_degree(color) {
                    let Some(td) = sol.face_weight(color, d) else { continue };
                    let small = self.pow(color, d as u32 - 1);
                    // White pairs [z^h]x^{p+1} with [z^{-h}]x^{d-1}; black swaps the roles.
                    let s = match color {
                        Color::White => pairing(big, small, |h| h >= 1),
                        Color::Black => pairing(small, big, |h| h >= 1),
                    };
                    acc -= &(&td * &s);
                }
                acc.scale(&inv)
            }
            (DiskRoute::AppendixB, _) => {
                let w = StepWeights::from_solution(sol, color);
                let nonneg = |h: i32| walk_count_dp(&w, p, -h, Some(-h));
                let mut rest = self.zero();
                for d in 2..=sol.max_degree(color) {
                    let Some(td) = sol.face_weight(color, d) else { continue };
                    let mut inner = self.zero();
                    // P^≥_{p,-h} vanishes for h > p.
                    for h in 1..=p as i32 {
                        let up = self.walks(color, d as u32 - 1, h + 1);
                        if !up.is_zero() {
                            inner += &(&up * &nonneg(h));
                        }
                    }
                    rest += &(&td * &inner);
                }
                if color == Color::White {
                    rest = &sol.a(-1) * &rest;
                }
                &(&sol.weights().t() * &nonneg(0)) - &rest
            }
        }
    }

    /// `F_p` by all three routes; any disagreement is an error.
    pub fn disk_checked(&self, color: Color, p: u32) -> Result<MSeries> {
        let values = par::map(&DiskRoute::ALL, |r| self.disk(color, p, *r));
        for (route, v) in DiskRoute::ALL.iter().zip(&values).skip(1) {
            if let Some(m) = compare_series("disk", &values[0], v) {
                return Err(Error::RouteMismatch {
                    what: format!("F_{p} ({color:?}), compact vs {}", route.name()),
                    detail: format!("{} at {}: {} vs {}", m.location, m.monomial, m.left, m.right),
                });
            }
        }
        Ok(values.into_iter().next().expect("three routes"))
    }

    pub fn disk_table(&self, color: Color, p_max: u32) -> Result<Vec<GFResult>> {
        let cells = par::map_range(p_max as usize + 1, |p| self.disk_checked(color, p as u32));
        cells
            .into_iter()
            .enumerate()
            .map(|(p, v)| {
                Ok(GFResult {
                    spec: BoundarySpec { kind: BoundaryKind::Disk, colors: vec![color], degrees: vec![p as u32], girth: None },
                    route: "compact=expanded=appendix_b".into(),
                    value: v?,
                })
            })
            .collect()
    }

    pub fn cylinder_table(&self, kind: CylinderKind, p_max: u32, q_max: u32) -> Vec<GFResult> {
        let cells: Vec<(u32, u32)> = (1..=p_max).flat_map(|p| (1..=q_max).map(move |q| (p, q))).collect();
        let (outer, central) = kind.colors();
        let boundary = match kind {
            CylinderKind::OneWay => BoundaryKind::OneWayCylinder,
            _ => BoundaryKind::Cylinder,
        };
        par::map(&cells, |&(p, q)| GFResult {
            spec: BoundarySpec { kind: boundary, colors: vec![outer, central], degrees: vec![p, q], girth: None },
            route: kind.name().into(),
            value: self.cylinder(kind, p, q),
        })
    }

    /// `L(x,y) = Σ F̂°•_{p,q}/(pq) x^{-p} y^{-q}` for `p ≤ p_max+1`, `q ≤ q_max+1`.
    pub fn dobrushin_log(&self, p_max: u32, q_max: u32) -> BiTail {
        let (pm, qm) = (p_max + 1, q_max + 1);
        let cells: Vec<(u32, u32)> = (1..=pm).flat_map(|p| (1..=qm).map(move |q| (p, q))).collect();
        let vals = par::map(&cells, |&(p, q)| {
            let v = self.cylinder(CylinderKind::OneWay, p, q).scale(&frac(1, (p * q) as i64));
            ((-(p as i32), -(q as i32)), v)
        });
        BiTail::with_orders(self.sol.vars(), ("x", "y"), (pm, qm), vals)
    }

    /// Dobrushin series by the exponential formula and by the blob relation.
    pub fn dobrushin(&self, p_max: u32, q_max: u32) -> Result<Dobrushin> {
        let needed = p_max.max(q_max) + 1;
        if needed > self.max_power() {
            return Err(Error::Domain(format!("Dobrushin table needs powers up to {needed}")));
        }
        let l = self.dobrushin_log(p_max, q_max);
        let w = l.expm1()?;
        let blobs = l.neg().expm1()?.neg();
        let via_blobs = blobs.geometric()?;
        let d = Dobrushin { p_max, q_max, w, blobs, via_blobs };
        if let Some(m) = d.route_mismatch() {
            return Err(Error::RouteMismatch { what: "Dobrushin exp vs blob".into(), detail: format!("{m:?}") });
        }
        Ok(d)
    }
}

/// `W(x,y) = Σ F◐_{p,q} x^{-p-1} y^{-q-1}` and the blob series `B(x,y)`.
#[derive(Clone, Debug)]
pub struct Dobrushin {
    pub p_max: u32,
    pub q_max: u32,
    /// `exp(L) - 1`.
    pub w: BiTail,
    /// `B = 1 - exp(-L)`.
    pub blobs: BiTail,
    /// `1/(1-B) - 1`.
    pub via_blobs: BiTail,
}

impl Dobrushin {
    pub fn value(&self, p: u32, q: u32) -> Result<MSeries> {
        if p > self.p_max || q > self.q_max {
            return Err(Error::Domain(format!("F◐_({p},{q}) beyond the table ({}, {})", self.p_max, self.q_max)));
        }
        Ok(self.w.coeff((-(p as i32) - 1, -(q as i32) - 1)))
    }

    /// Blob series `B_{p,q}`.
    pub fn blob(&self, p: u32, q: u32) -> Result<MSeries> {
        if p > self.p_max || q > self.q_max {
            return Err(Error::Domain(format!("B_({p},{q}) beyond the table ({}, {})", self.p_max, self.q_max)));
        }
        Ok(self.blobs.coeff((-(p as i32) - 1, -(q as i32) - 1)))
    }

    pub fn route_mismatch(&self) -> Option<Mismatch> {
        compare_bitails(&self.w, &self.via_blobs).0
    }

    pub fn table(&self) -> Vec<GFResult> {
        let mut out = Vec::new();
        for p in 0..=self.p_max {
            for q in 0..=self.q_max {
                out.push(GFResult {
                    spec: BoundarySpec {
                        kind: BoundaryKind::Dobrushin,
                        colors: vec![Color::White, Color::Black],
                        degrees: vec![p, q],
                        girth: None,
                    },
                    route: "exp=blob".into(),
                    value: self.value(p, q).expect("inside the table"),
                });
            }
        }
        out
    }
}

pub fn pointed_disk(sol: &SliceSolution, color: Color, p: u32) -> MSeries {
    walk_count(sol.poly(color), color, p, 0)
}

pub fn trumpet_cornet(sol: &SliceSolution, kind: TrumpetKind, color: Color, p: u32, h: u32) -> MSeries {
    Gf::new(sol, p).trumpet_cornet(kind, color, p, h)
}

pub fn cylinder(sol: &SliceSolution, kind: CylinderKind, p: u32, q: u32) -> MSeries {
    Gf::new(sol, p.max(q)).cylinder(kind, p, q)
}

pub fn disk(sol: &SliceSolution, color: Color, p: u32, route: DiskRoute) -> MSeries {
    Gf::for_perimeters(sol, p).disk(color, p, route)
}

pub fn dobrushin(sol: &SliceSolution, p: u32, q: u32, p_max: u32, q_max: u32) -> Result<MSeries> {
    Gf::new(sol, p_max.max(q_max) + 1).dobrushin(p_max, q_max)?.value(p, q)
}

fn first<I: IntoIterator<Item = Option<Mismatch>>>(it: I) -> Option<Mismatch> {
    it.into_iter().flatten().next()
}

fn located(loc: String, m: Option<Mismatch>) -> Option<Mismatch> {
    m.map(|m| Mismatch { location: format!("{loc}: {}", m.location), ..m })
}

/// Identity suite for the fixed-perimeter series of one solution, perimeters
/// up to `p_max`.
pub fn verify(sol: &SliceSolution, p_max: u32) -> SuiteReport {
    let gf = Gf::for_perimeters(sol, p_max.max(4) + 1);
    let vars = sol.vars();
    let n = sol.order();
    let t = sol.weights().t();
    let colors = [Color::White, Color::Black];
    let mut checks = Vec::new();

    // Disks by three routes, F_0 = t and integrality.
    let mut disks = [Vec::new(), Vec::new()];
    let mut route_err = None;
    for (i, &c) in colors.iter().enumerate() {
        for p in 0..=p_max {
            match gf.disk_checked(c, p) {
                Ok(v) => disks[i].push(v),
                Err(e) => {
                    route_err.get_or_insert(e.to_string());
                    disks[i].push(gf.disk(c, p, DiskRoute::Compact));
                }
            }
        }
    }
    checks.push(match &route_err {
        None => Check::new("disk_routes_agree", None),
        Some(e) => Check::flag("disk_routes_agree", false, e),
    });
    checks.push(Check::new(
        "disk_at_zero_is_t",
        first(disks.iter().map(|d| compare_series("F_0", &d[0], &t))),
    ));
    let non_integral = disks.iter().flatten().position(|d| !d.is_integral());
    checks.push(Check::flag("disk_coefficients_integral", non_integral.is_none(), "non-integral disk coefficient"));

    // ∂F_p/∂t = P_{p,0}.
    let ti = sol.weights().t_index();
    let pointing = first(colors.iter().enumerate().flat_map(|(i, &c)| {
        let disks = &disks[i];
        let gf = &gf;
        (0..=p_max).map(move |p| {
            let left = disks[p as usize].derivative(ti).truncate(n.saturating_sub(1));
            let right = gf.pointed_disk(c, p).truncate(n.saturating_sub(1));
            located(format!("{c:?} p={p}"), compare_series("dF/dt", &left, &right))
        })
    }));
    checks.push(Check::new("pointing", pointing));

    // Σ a_k b_k - t = Σ_p t°_p ∂F°_p/∂t = Σ_p t•_p ∂F•_p/∂t.
    let lhs = &sol.sum_akbk() - &t;
    let pr = first(colors.iter().map(|&c| {
        let mut acc = MSeries::zero(vars);
        for p in 1..=sol.max_degree(c) {
            if let Some(tp) = sol.face_weight(c, p) {
                acc += &(&tp * &gf.pointed_disk(c, p as u32));
            }
        }
        located(format!("{c:?}"), compare_series("pointed rooted", &lhs, &acc))
    }));
    checks.push(Check::new("pointed_rooted_consistency", pr));

    // Symmetry of the monochromatic cylinders.
    let cmax = p_max.min(5);
    let sym = first([CylinderKind::Ww, CylinderKind::Bb].iter().flat_map(|&k| {
        let gf = &gf;
        (1..=cmax).flat_map(move |p| {
            (p + 1..=cmax).map(move |q| {
                located(
                    format!("{} ({p},{q})", k.name()),
                    compare_series("swap", &gf.cylinder(k, p, q), &gf.cylinder(k, q, p)),
                )
            })
        })
    }));
    checks.push(Check::new("cylinder_symmetry", sym));

    // F°°_{p,q} = q ∂F°_p/∂t°_q etc., exact up to degree N-1.
    let dmax = p_max.min(4);
    let cut = n.saturating_sub(1);
    let mut deriv = None;
    'outer: for p in 1..=dmax {
        for q in 1..=dmax {
            let cases = [
                (CylinderKind::Ww, Color::White, p, Color::White, q),
                (CylinderKind::Ww, Color::White, q, Color::White, p),
                (CylinderKind::Bb, Color::Black, p, Color::Black, q),
                (CylinderKind::Bb, Color::Black, q, Color::Black, p),
                (CylinderKind::Wb, Color::White, p, Color::Black, q),
                (CylinderKind::Wb, Color::Black, q, Color::White, p),
            ];
            for (kind, disk_color, disk_p, var_color, var_d) in cases {
                let idx = match var_color {
                    Color::White => sol.weights().white_index(var_d as usize),
                    Color::Black => sol.weights().black_index(var_d as usize),
                };
                let Some(idx) = idx else { continue };
                let left = gf.cylinder(kind, p, q).truncate(cut);
                let right = disks[(disk_color == Color::Black) as usize][disk_p as usize]
                    .derivative(idx)
                    .scale_int(var_d as i64)
                    .truncate(cut);
                if let Some(m) = compare_series(&format!("{} ({p},{q})", kind.name()), &left, &right) {
                    deriv = Some(m);
                    break 'outer;
                }
            }
        }
    }
    checks.push(Check::new("cylinder_derivative_relations", deriv));

    // (p+1) F°_p = F̂_{p+1,1} = F°•_{p+1,1} - F̃•°_{1,p+1} and the black analogue.
    let mut trick = None;
    for p in 0..=p_max.min(4) {
        let w = disks[0][p as usize].scale_int(p as i64 + 1);
        let b = disks[1][p as usize].scale_int(p as i64 + 1);
        let w_hat = gf.cylinder(CylinderKind::OneWay, p + 1, 1);
        let b_hat = gf.cylinder(CylinderKind::OneWay, 1, p + 1);
        let w_two = &gf.cylinder(CylinderKind::Wb, p + 1, 1) - &gf.cylinder(CylinderKind::TwoWayBw, 1, p + 1);
        let b_two = &gf.cylinder(CylinderKind::Wb, 1, p + 1) - &gf.cylinder(CylinderKind::TwoWayBw, p + 1, 1);
        trick = trick
            .or_else(|| compare_series(&format!("white p={p}, one-way"), &w, &w_hat))
            .or_else(|| compare_series(&format!("white p={p}, two-way"), &w, &w_two))
            .or_else(|| compare_series(&format!("black p={p}, one-way"), &b, &b_hat))
            .or_else(|| compare_series(&format!("black p={p}, two-way"), &b, &b_two));
    }
    checks.push(Check::new("disk_cylinder_relation", trick));

    // F̃•°_{1,p+1} = Σ_d t°_d F°°_{p+1,d-1}, F̃•°_{p+1,1} = Σ_d t•_d F••_{p+1,d-1}.
    let mut collapse = None;
    for p in 0..=p_max.min(3) {
        for (c, kind, left) in [
            (Color::White, CylinderKind::Ww, gf.cylinder(CylinderKind::TwoWayBw, 1, p + 1)),
            (Color::Black, CylinderKind::Bb, gf.cylinder(CylinderKind::TwoWayBw, p + 1, 1)),
        ] {
            let mut right = MSeries::zero(vars);
            for d in 2..=sol.max_degree(c) {
                if let Some(td) = sol.face_weight(c, d) {
                    right += &(&td * &gf.cylinder(kind, p + 1, d as u32 - 1));
                }
            }
            collapse = collapse.or_else(|| compare_series(&format!("{c:?} p={p}"), &left, &right));
        }
    }
    checks.push(Check::new("two_way_collapse", collapse));

    // Dobrushin: both routes, and the boundary rows are disks.
    let dmax = p_max.min(3);
    match gf.dobrushin(dmax, dmax) {
        Ok(d) => {
            checks.push(Check::new("dobrushin_exp_vs_blob", None));
            let mut rows = None;
            for p in 0..=dmax {
                let v = d.value(p, 0).expect("in table");
                rows = rows.or_else(|| compare_series(&format!("({p},0)"), &v, &disks[0][p as usize]));
                let v = d.value(0, p).expect("in table");
                rows = rows.or_else(|| compare_series(&format!("(0,{p})"), &v, &disks[1][p as usize]));
            }
            checks.push(Check::new("dobrushin_boundary_rows", rows));
        }
        Err(e) => checks.push(Check::flag("dobrushin_exp_vs_blob", false, &e.to_string())),
    }

    SuiteReport::new("gf")
        .param("dw", sol.bounds().white)
        .param("db", sol.bounds().black)
        .param("order", n)
        .param("p_max", p_max)
        .with_checks(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slices::{solve_slice_system, DegreeBounds};

    fn sol(dw: usize, db: usize, n: u32) -> SliceSolution {
        solve_slice_system(DegreeBounds::new(dw, db).unwrap(), n)
    }

    #[test]
    fn small_values_two_two() {
        let s = sol(2, 2, 6);
        let gf = Gf::for_perimeters(&s, 3);
        let t = s.weights().t();
        assert_eq!(gf.pointed_disk(Color::White, 0), MSeries::one(s.vars()));
        assert_eq!(gf.pointed_disk(Color::White, 1), s.a(0));
        assert_eq!(gf.pointed_disk(Color::Black, 2), &(&s.b(0) * &s.b(0)) + &s.b(1).scale_int(2));
        assert_eq!(gf.trumpet_cornet(TrumpetKind::Cornet, Color::Black, 1, 1), MSeries::one(s.vars()));
        assert_eq!(gf.trumpet_cornet(TrumpetKind::Trumpet, Color::White, 1, 1), s.a(-1));
        assert!(gf.trumpet_cornet(TrumpetKind::Trumpet, Color::White, 1, 2).is_zero());
        assert_eq!(gf.cylinder(CylinderKind::Ww, 1, 1), &s.a(-1) * &s.a(1));
        assert_eq!(gf.cylinder(CylinderKind::Wb, 1, 1), s.a(-1));
        assert_eq!(gf.cylinder(CylinderKind::OneWay, 1, 1), t);
        let tw2 = s.weights().white(2).unwrap();
        let two_way = gf.cylinder(CylinderKind::TwoWayBw, 1, 1);
        assert_eq!(two_way, &s.a(-1) - &t);
        assert_eq!(two_way, &tw2 * &gf.cylinder(CylinderKind::Ww, 1, 1));
        for route in DiskRoute::ALL {
            assert_eq!(gf.disk(Color::White, 0, route), t, "{route:?}");
            assert_eq!(gf.disk(Color::Black, 0, route), t, "{route:?}");
            assert_eq!(gf.disk(Color::White, 1, route), &t * &s.a(0), "{route:?}");
            assert_eq!(gf.disk(Color::Black, 1, route), &t * &s.b(0), "{route:?}");
        }
    }

    #[test]
    fn lowest_terms_of_the_first_white_disk() {
        let s = sol(2, 2, 3);
        let f = disk(&s, Color::White, 1, DiskRoute::Compact);
        let v = s.vars();
        let tb1 = MSeries::var_named(v, "tb1").unwrap();
        let t = MSeries::var_named(v, "t").unwrap();
        let tw1 = MSeries::var_named(v, "tw1").unwrap();
        let tb2 = MSeries::var_named(v, "tb2").unwrap();
        assert_eq!(f, &(&t * &tb1) + &(&t * &(&tw1 * &tb2)));
    }

    #[test]
    fn dobrushin_corner_and_routes() {
        let s = sol(2, 2, 5);
        let gf = Gf::for_perimeters(&s, 3);
        let d = gf.dobrushin(2, 2).unwrap();
        assert_eq!(d.value(0, 0).unwrap(), s.weights().t());
        assert_eq!(d.blob(0, 0).unwrap(), s.weights().t());
        assert!(d.value(3, 0).is_err());
        assert_eq!(dobrushin(&s, 1, 1, 2, 2).unwrap(), d.value(1, 1).unwrap());
    }

    #[test]
    fn suite_passes_for_small_bounds() {
        for (dw, db) in [(1, 1), (2, 2), (3, 2), (2, 3)] {
            let r = verify(&sol(dw, db, 4), 4);
            assert!(r.passed(), "{}", serde_json::to_string_pretty(&r).unwrap());
        }
    }

    #[test]
    fn perturbed_solution_fails_the_suite() {
        let s = sol(2, 2, 4);
        let mut json = serde_json::to_value(&s).unwrap();
        // Double the lowest coefficient of a_0.
        let a0 = json["a"].as_array_mut().unwrap().iter_mut().find(|e| e["k"] == 0).unwrap();
        a0["series"]["terms"][0]["numerator"] = "2".into();
        let bad: SliceSolution = serde_json::from_value(json).unwrap();
        assert_ne!(bad, s);
        let r = verify(&bad, 3);
        assert!(!r.passed());
    }
}
