//! Invariant ledger of a simply connected 4-manifold under construction and
//! the surgeries acting on it: knot surgery in a double node, blowups,
//! smoothing a blown-up fishtail into the section, and rational blowdown of a
//! linear plumbing.
//!
//! Homology classes are written in the basis `T` (fiber), `S` (section) and
//! exceptional classes `E1, E2, ...`, with `T.T = 0`, `T.S = 1`,
//! `S.S = -n`, `E_i.E_j = -delta_ij` and the `E_j` orthogonal to `T` and `S`.
//! Seiberg-Witten functions are Laurent polynomials in generators `T` and
//! `E<j>`, kept factored.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::factored::{FactoredLaurent, PairingConstraint};
use crate::laurent::{Generator, LaurentPoly};
use crate::plumbing::Chain;

pub const FIBER: &str = "T";
pub const SECTION: &str = "S";

/// Largest expansion `basic_classes` and `to_json` will perform.
pub const EXPANSION_LIMIT: u128 = 1 << 22;

pub fn exceptional_name(j: usize) -> String {
    format!("E{j}")
}

fn exceptional_index(name: &str) -> Option<usize> {
    name.strip_prefix('E')?.parse().ok().filter(|&j| j >= 1)
}

/// `t T + s S + sum_j e[j-1] E_j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HomologyClass {
    #[serde(rename = "T")]
    pub t: i64,
    #[serde(rename = "E")]
    pub e: Vec<i64>,
    #[serde(rename = "S", skip_serializing_if = "is_zero")]
    pub s: i64,
}

fn is_zero(x: &i64) -> bool {
    *x == 0
}

impl HomologyClass {
    pub fn fiber() -> Self {
        HomologyClass {
            t: 1,
            ..Default::default()
        }
    }

    pub fn section() -> Self {
        HomologyClass {
            s: 1,
            ..Default::default()
        }
    }

    pub fn exceptional(j: usize) -> Self {
        HomologyClass::default().with_e(j, 1)
    }

    /// Coefficient of `E_j` (1-based).
    pub fn e_coeff(&self, j: usize) -> i64 {
        self.e.get(j - 1).copied().unwrap_or(0)
    }

    pub fn with_e(mut self, j: usize, coeff: i64) -> Self {
        if self.e.len() < j {
            self.e.resize(j, 0);
        }
        self.e[j - 1] = coeff;
        self.trim()
    }

    pub fn plus(&self, other: &HomologyClass) -> Self {
        let len = self.e.len().max(other.e.len());
        let e = (0..len)
            .map(|i| self.e.get(i).unwrap_or(&0) + other.e.get(i).unwrap_or(&0))
            .collect();
        HomologyClass {
            t: self.t + other.t,
            e,
            s: self.s + other.s,
        }
        .trim()
    }

    pub fn scaled(&self, k: i64) -> Self {
        HomologyClass {
            t: k * self.t,
            e: self.e.iter().map(|x| k * x).collect(),
            s: k * self.s,
        }
        .trim()
    }

    fn trim(mut self) -> Self {
        while self.e.last() == Some(&0) {
            self.e.pop();
        }
        self
    }

    /// The class with exponent vector `exp` over `generators`.
    pub(crate) fn from_exponents(
        generators: &[Generator],
        exp: &[i64],
        width: usize,
    ) -> Result<Self> {
        let mut class = HomologyClass {
            e: vec![0; width],
            ..Default::default()
        };
        for (g, &x) in generators.iter().zip(exp) {
            match g.name() {
                FIBER => class.t += x,
                SECTION => class.s += x,
                name => match exceptional_index(name) {
                    Some(j) if j <= width => class.e[j - 1] += x,
                    _ => return Err(Error::Domain(format!("unknown generator {name}"))),
                },
            }
        }
        Ok(class)
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut push = |c: i64, name: String| match c {
            0 => {}
            1 => parts.push(name),
            -1 => parts.push(format!("-{name}")),
            c => parts.push(format!("{c}{name}")),
        };
        push(self.t, FIBER.into());
        push(self.s, SECTION.into());
        for (i, &c) in self.e.iter().enumerate() {
            push(c, exceptional_name(i + 1));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

/// Intersection pairing in the `T, S, E_j` basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub section_square: i64,
}

impl IntersectionForm {
    pub fn pair(&self, x: &HomologyClass, y: &HomologyClass) -> i64 {
        let e: i64 = x.e.iter().zip(&y.e).map(|(a, b)| a * b).sum();
        x.t * y.s + x.s * y.t + x.s * y.s * self.section_square - e
    }
}

/// Sphere `u_i` of a configuration: its self-intersection `-r_i` and the
/// pairings `g . u_i` with the basis classes, keyed by generator name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigSphere {
    pub self_int_abs: u64,
    pub pairing: BTreeMap<String, i64>,
}

impl ConfigSphere {
    /// A sphere in the class `class`, with pairings read off the form.
    pub fn from_class(class: &HomologyClass, form: &IntersectionForm, self_int_abs: u64) -> Self {
        let mut pairing = BTreeMap::new();
        let mut put = |name: String, basis: HomologyClass| {
            let v = form.pair(&basis, class);
            if v != 0 {
                pairing.insert(name, v);
            }
        };
        put(FIBER.into(), HomologyClass::fiber());
        put(SECTION.into(), HomologyClass::section());
        for j in 1..=class.e.len() {
            put(exceptional_name(j), HomologyClass::exceptional(j));
        }
        ConfigSphere {
            self_int_abs,
            pairing,
        }
    }

    /// A `-2` sphere inside a fiber, meeting the section `section_hits` times.
    pub fn fiber_component(section_hits: i64) -> Self {
        let mut pairing = BTreeMap::new();
        if section_hits != 0 {
            pairing.insert(SECTION.to_string(), section_hits);
        }
        ConfigSphere {
            self_int_abs: 2,
            pairing,
        }
    }

    /// `beta . u` for a class with no `S` component.
    pub fn pair_with(&self, beta: &HomologyClass) -> i64 {
        let get = |k: &str| self.pairing.get(k).copied().unwrap_or(0);
        let mut v = beta.t * get(FIBER) + beta.s * get(SECTION);
        for (i, &c) in beta.e.iter().enumerate() {
            v += c * get(&exceptional_name(i + 1));
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Resources {
    pub i2_nodes_left: u64,
    pub fishtails_left: u64,
    pub necklace_spheres_left: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionRecord {
    pub self_intersection: i64,
    pub class: HomologyClass,
    pub double_points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct PendingFishtail {
    exceptional: usize,
    class: HomologyClass,
    square: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlowupKind {
    SectionDoublePoint,
    Fishtail,
    Free,
}

impl fmt::Display for BlowupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlowupKind::SectionDoublePoint => "section_double_point",
            BlowupKind::Fishtail => "fishtail",
            BlowupKind::Free => "free",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Nonsymplectic,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Nonsymplectic => "nonsymplectic",
            Verdict::Unknown => "unknown",
        })
    }
}

/// One applied operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    EllipticSurface {
        n: u32,
    },
    KnotSurgery {
        alexander: String,
        monic: bool,
    },
    Blowup {
        kind: BlowupKind,
        exceptional: usize,
    },
    SmoothFishtail {
        exceptional: usize,
    },
    RationalBlowdown {
        p: u64,
        q: u64,
        length: usize,
    },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::EllipticSurface { n } => write!(f, "elliptic_surface(n={n})"),
            Step::KnotSurgery { alexander, monic } => {
                write!(
                    f,
                    "knot_surgery_double_node(delta={alexander}, monic={monic})"
                )
            }
            Step::Blowup { kind, exceptional } => write!(f, "blow_up({kind}, E{exceptional})"),
            Step::SmoothFishtail { exceptional } => {
                write!(f, "smooth_with_fishtail(E{exceptional})")
            }
            Step::RationalBlowdown { p, q, length } => {
                write!(f, "rational_blowdown(C_{{{p},{q}}}, k={length})")
            }
        }
    }
}

impl Serialize for Step {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Invariant record of a simply connected 4-manifold.
///
/// Values are immutable; every operation returns a new state.
#[derive(Clone, Debug)]
pub struct ManifoldState {
    euler: i64,
    signature: i64,
    b2_plus: i64,
    simply_connected: bool,
    sw: FactoredLaurent,
    resources: Resources,
    section: SectionRecord,
    form: IntersectionForm,
    exceptional_count: usize,
    pending_fishtails: Vec<PendingFishtail>,
    non_monic_surgeries: usize,
    c1sq_tracked: i64,
    history: Vec<Step>,
}

impl ManifoldState {
    pub fn euler(&self) -> i64 {
        self.euler
    }

    pub fn signature(&self) -> i64 {
        self.signature
    }

    pub fn b2_plus(&self) -> i64 {
        self.b2_plus
    }

    pub fn simply_connected(&self) -> bool {
        self.simply_connected
    }

    pub fn sw(&self) -> &FactoredLaurent {
        &self.sw
    }

    pub fn resources(&self) -> Resources {
        self.resources
    }

    pub fn section(&self) -> &SectionRecord {
        &self.section
    }

    pub fn form(&self) -> IntersectionForm {
        self.form
    }

    pub fn exceptional_count(&self) -> usize {
        self.exceptional_count
    }

    pub fn pending_fishtails(&self) -> usize {
        self.pending_fishtails.len()
    }

    pub fn history(&self) -> &[Step] {
        &self.history
    }

    /// `c_1^2 = 3 sigma + 2 e`.
    pub fn c1_squared(&self) -> i64 {
        3 * self.signature + 2 * self.euler
    }

    /// `c_1^2` as accumulated operation by operation.
    pub fn tracked_c1_squared(&self) -> i64 {
        self.c1sq_tracked
    }

    /// `chi_h = (e + sigma) / 4`.
    pub fn chi_h(&self) -> i64 {
        (self.euler + self.signature).div_euclid(4)
    }

    pub fn used_non_monic_surgery(&self) -> bool {
        self.non_monic_surgeries > 0
    }

    /// Every ledger invariant that fails, as readable messages.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if (self.euler + self.signature).rem_euclid(4) != 0 {
            out.push(format!(
                "e + sigma = {} not divisible by 4",
                self.euler + self.signature
            ));
        }
        if self.c1sq_tracked != self.c1_squared() {
            out.push(format!(
                "tracked c1^2 = {} but 3 sigma + 2 e = {}",
                self.c1sq_tracked,
                self.c1_squared()
            ));
        }
        if !self.sw.check_symmetry(self.chi_h()) {
            out.push(format!(
                "SW function not symmetric with sign exponent {}",
                self.chi_h()
            ));
        }
        let square = self.form.pair(&self.section.class, &self.section.class);
        if square != self.section.self_intersection {
            out.push(format!(
                "section self-intersection {} but class {} squares to {square}",
                self.section.self_intersection, self.section.class
            ));
        }
        for p in &self.pending_fishtails {
            if self.form.pair(&p.class, &p.class) != p.square {
                out.push(format!("pending fishtail {} has wrong square", p.class));
            }
        }
        out
    }

    fn with_step(mut self, step: Step) -> Self {
        self.history.push(step);
        self
    }

    /// Basic classes and their values, sorted by class.
    pub fn basic_classes(&self) -> Result<Vec<(HomologyClass, BigInt)>> {
        let poly = self.sw.expand_within(EXPANSION_LIMIT)?;
        let mut out = poly
            .terms()
            .map(|(e, c)| {
                HomologyClass::from_exponents(poly.generators(), e, self.exceptional_count)
                    .map(|class| (class, c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }

    /// The SW function expanded over `T, E1, ..., Em`.
    pub fn sw_expanded(&self) -> Result<LaurentPoly> {
        let poly = self.sw.expand_within(EXPANSION_LIMIT)?;
        let mut gens = vec![Generator::new(FIBER)];
        gens.extend((1..=self.exceptional_count).map(|j| Generator::new(exceptional_name(j))));
        Ok(poly.reindexed(&gens))
    }

    pub fn to_json(&self) -> Result<Value> {
        let sw = self.sw_expanded()?;
        let classes: Vec<Value> = self
            .basic_classes()?
            .into_iter()
            .map(|(class, v)| json!({"class": class, "value": v.to_string()}))
            .collect();
        let verdict = match symplectic_verdict(self) {
            Ok(v) => v.to_string(),
            Err(_) => "undefined".to_string(),
        };
        Ok(json!({
            "e": self.euler,
            "sigma": self.signature,
            "b2plus": self.b2_plus,
            "c1sq": self.c1_squared(),
            "chi_h": self.chi_h(),
            "simply_connected": self.simply_connected,
            "sw": sw,
            "basic_classes": classes,
            "verdict": verdict,
            "resources": self.resources,
            "section": self.section,
            "history": self.history,
        }))
    }
}

/// `E(n)`: `e = 12n`, `sigma = -8n`, `b2+ = 2n - 1`, `SW = (T - T^-1)^{n-2}`,
/// with the fibration of one `I_{8n}`, `2n - 1` double nodes, two fishtails
/// and a section of square `-n`.
pub fn elliptic_surface(n: u32) -> Result<ManifoldState> {
    if n < 2 {
        return Err(Error::Domain(format!("E(n) needs n >= 2, got {n}")));
    }
    let ni = i64::from(n);
    let base = LaurentPoly::univariate(FIBER, [(1, 1), (-1, -1)]);
    let sw = FactoredLaurent::from_poly(&base.pow(n - 2));
    Ok(ManifoldState {
        euler: 12 * ni,
        signature: -8 * ni,
        b2_plus: 2 * ni - 1,
        simply_connected: true,
        sw,
        resources: Resources {
            i2_nodes_left: 2 * u64::from(n) - 1,
            fishtails_left: 2,
            necklace_spheres_left: 8 * u64::from(n),
        },
        section: SectionRecord {
            self_intersection: -ni,
            class: HomologyClass::section(),
            double_points: 0,
        },
        form: IntersectionForm {
            section_square: -ni,
        },
        exceptional_count: 0,
        pending_fishtails: Vec::new(),
        non_monic_surgeries: 0,
        c1sq_tracked: 0,
        history: vec![Step::EllipticSurface { n }],
    })
}

/// Alexander polynomial `r t - (2r - 1) + r t^-1` of the `r`-twist knot in
/// the variable `t`; `Delta(1) = 1`, top coefficient `r`.
pub fn twist_knot_alexander(r: u64) -> Result<LaurentPoly> {
    if r < 1 {
        return Err(Error::Domain("twist knot needs r >= 1".into()));
    }
    let r = BigInt::from(r);
    let mid = BigInt::one() - BigInt::from(2) * &r;
    Ok(LaurentPoly::univariate(
        "t",
        [(1, r.clone()), (0, mid), (-1, r)],
    ))
}

/// Whether the leading coefficient of a one-variable polynomial is `+-1`.
pub fn is_monic(delta: &LaurentPoly) -> bool {
    delta
        .terms()
        .next_back()
        .is_some_and(|(_, c)| c.abs().is_one())
}

/// Knot surgery in a double node: `SW <- SW * Delta(T^2)`, one `I_2` used, one
/// more double point on the pseudo-section.
pub fn knot_surgery_double_node(m: &ManifoldState, delta: &LaurentPoly) -> Result<ManifoldState> {
    if m.b2_plus <= 1 {
        return Err(Error::InsufficientB2Plus(m.b2_plus));
    }
    if m.resources.i2_nodes_left == 0 {
        return Err(Error::ResourceExhausted("I_2 nodes"));
    }
    let used = delta.used_generators();
    if used.len() > 1 {
        return Err(Error::Domain(format!(
            "Alexander polynomial must be univariate, got {delta}"
        )));
    }
    if delta.is_zero() || !delta.check_symmetry(0) {
        return Err(Error::Domain(format!(
            "Alexander polynomial must be nonzero and symmetric under t -> t^-1, got {delta}"
        )));
    }
    let factor = match used.first() {
        Some(var) => delta.substitute_power(var, FIBER, 2),
        None => delta.clone(),
    };
    let monic = is_monic(delta);
    let mut next = m.clone();
    next.sw = m.sw.mul_poly(&factor);
    next.resources.i2_nodes_left -= 1;
    next.section.double_points += 1;
    if !monic {
        next.non_monic_surgeries += 1;
    }
    Ok(next.with_step(Step::KnotSurgery {
        alexander: delta.to_string(),
        monic,
    }))
}

/// Blowup: `e + 1`, `sigma - 1`, a fresh `E_j`, `SW <- SW * (E_j + E_j^-1)`.
pub fn blow_up(m: &ManifoldState, kind: BlowupKind) -> Result<ManifoldState> {
    match kind {
        BlowupKind::SectionDoublePoint if m.section.double_points == 0 => {
            return Err(Error::ResourceExhausted("section double points"));
        }
        BlowupKind::Fishtail if m.resources.fishtails_left == 0 => {
            return Err(Error::ResourceExhausted("fishtail fibers"));
        }
        _ => {}
    }
    let mut next = m.clone();
    let j = m.exceptional_count + 1;
    let name = exceptional_name(j);
    let factor = &LaurentPoly::variable(&name) + &LaurentPoly::monomial(&[(name.as_str(), -1)], 1);
    next.exceptional_count = j;
    next.euler += 1;
    next.signature -= 1;
    next.c1sq_tracked -= 1;
    next.sw = m.sw.mul_poly(&factor);
    match kind {
        BlowupKind::SectionDoublePoint => {
            next.section.double_points -= 1;
            next.section.self_intersection -= 4;
            let e = next.section.class.e_coeff(j);
            next.section.class = next.section.class.clone().with_e(j, e - 2);
        }
        BlowupKind::Fishtail => {
            next.resources.fishtails_left -= 1;
            next.pending_fishtails.push(PendingFishtail {
                exceptional: j,
                class: HomologyClass::fiber().plus(&HomologyClass::exceptional(j).scaled(-2)),
                square: -4,
            });
        }
        BlowupKind::Free => {}
    }
    Ok(next.with_step(Step::Blowup {
        kind,
        exceptional: j,
    }))
}

/// Smooths the section's intersection with the most recent blown-up fishtail:
/// section class gains `F - 2E_j`, its square drops by 2.
pub fn smooth_with_fishtail(m: &ManifoldState) -> Result<ManifoldState> {
    let mut next = m.clone();
    let pending = next
        .pending_fishtails
        .pop()
        .ok_or(Error::MissingPendingFishtail)?;
    let meet = m.form.pair(&m.section.class, &pending.class);
    next.section.class = m.section.class.plus(&pending.class);
    next.section.self_intersection = m.section.self_intersection + pending.square + 2 * meet;
    Ok(next.with_step(Step::SmoothFishtail {
        exceptional: pending.exceptional,
    }))
}

/// The constraint `beta . u = +-(r - 2)` contributed by one sphere.
pub fn sphere_constraint(sphere: &ConfigSphere) -> PairingConstraint {
    PairingConstraint {
        weights: sphere.pairing.clone(),
        target: sphere.self_int_abs as i64 - 2,
    }
}

/// Replaces the plumbing by a rational ball: `e - k`, `sigma + k`, and a basic
/// class `beta` survives iff `beta . u_i = eps (r_i - 2)` for all `i` with one
/// sign `eps`, keeping its value.
///
/// `spheres` is aligned with `chain.coefficients`. The necklace supplies the
/// `-2` spheres after one of its spheres is removed.
pub fn rational_blowdown(
    m: &ManifoldState,
    chain: &Chain,
    spheres: &[ConfigSphere],
) -> Result<ManifoldState> {
    if m.b2_plus <= 1 {
        return Err(Error::InsufficientB2Plus(m.b2_plus));
    }
    if spheres.len() != chain.len() {
        return Err(Error::Configuration(format!(
            "{} spheres for a chain of length {}",
            spheres.len(),
            chain.len()
        )));
    }
    for (i, (s, &r)) in spheres.iter().zip(&chain.coefficients).enumerate() {
        if s.self_int_abs != r {
            return Err(Error::Configuration(format!(
                "sphere {i} has square -{} but the chain needs -{r}",
                s.self_int_abs
            )));
        }
    }
    let twos = spheres.iter().filter(|s| s.self_int_abs == 2).count() as u64;
    if m.resources.necklace_spheres_left < twos + 1 {
        return Err(Error::ResourceExhausted("necklace spheres"));
    }
    let k = chain.len() as i64;
    let constraints: Vec<PairingConstraint> = spheres.iter().map(sphere_constraint).collect();
    let mut next = m.clone();
    next.euler -= k;
    next.signature += k;
    next.c1sq_tracked += k;
    next.sw = m.sw.retain_pairings(&constraints);
    next.resources.necklace_spheres_left -= twos + 1;
    next.simply_connected = m.simply_connected && m.resources.fishtails_left >= 1;
    Ok(next.with_step(Step::RationalBlowdown {
        p: chain.p,
        q: chain.q,
        length: chain.len(),
    }))
}

/// Taubes check: nonsymplectic when a non-monic knot surgery was applied or no
/// basic class of maximal `T`-degree has value `+-1`; otherwise unknown.
pub fn symplectic_verdict(m: &ManifoldState) -> Result<Verdict> {
    if m.b2_plus <= 1 {
        return Err(Error::InsufficientB2Plus(m.b2_plus));
    }
    if m.used_non_monic_surgery() || !m.sw.top_part(FIBER).has_unit_coefficient() {
        Ok(Verdict::Nonsymplectic)
    } else {
        Ok(Verdict::Unknown)
    }
}

pub fn basic_classes(m: &ManifoldState) -> Result<Vec<(HomologyClass, BigInt)>> {
    m.basic_classes()
}

/// The end sphere of the configuration: the section, with square
/// `-self_int_abs`.
pub fn section_sphere(m: &ManifoldState) -> ConfigSphere {
    ConfigSphere::from_class(
        &m.section.class,
        &m.form,
        m.section.self_intersection.unsigned_abs(),
    )
}
