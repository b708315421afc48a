//! Built-in link diagrams, addressable by short spec strings.

use std::fmt;
use std::str::FromStr;

use crate::diagram::{CrossingClass, DiagramError, LinkDiagram, PlanarBuilder};

/// Largest twist count accepted for the Whitehead-type families.
pub const MAX_TWISTS: i32 = 20;
/// Largest unlink accepted.
pub const MAX_UNLINK: usize = 32;

/// Knot tied into a component of a family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnotType {
    Unknot,
    Trefoil,
    FigureEight,
}

impl KnotType {
    fn name(self) -> &'static str {
        match self {
            KnotType::Unknot => "unknot",
            KnotType::Trefoil => "trefoil",
            KnotType::FigureEight => "figure8",
        }
    }

    fn diagram(self) -> Option<LinkDiagram> {
        match self {
            KnotType::Unknot => None,
            KnotType::Trefoil => Some(trefoil()),
            KnotType::FigureEight => Some(figure_eight()),
        }
    }
}

impl FromStr for KnotType {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unknot" | "o" => Ok(KnotType::Unknot),
            "trefoil" | "3_1" => Ok(KnotType::Trefoil),
            "figure8" | "figureeight" | "4_1" => Ok(KnotType::FigureEight),
            _ => Err(DiagramError::UnsupportedSpec(format!("unknown knot `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogSpec {
    Unlink(usize),
    /// Two-crossing Hopf link with both crossings of the given sign.
    Hopf(i8),
    /// Hopf link with an extra positive curl on component 1 and a negative
    /// curl on component 2.
    Hopf4(i8),
    /// Closure of the braid `s1^3`.
    Trefoil,
    /// Closure of `s1^3 s2` with a negative curl: a second trefoil diagram.
    Trefoil5,
    FigureEight,
    Whitehead,
    /// Whitehead link with a curl on each component.
    WhiteheadKinked,
    Borromean,
    /// Two components with `lk = 0` and `m` full twists between the sides of
    /// component 1, which carries knot `k1`; component 2 carries `k2`.
    Fig5a { m: i32, k1: KnotType, k2: KnotType },
    /// Borromean rings with a copy of the `Fig5a(m)` pattern between every
    /// pair of components and knot `k` tied into each.
    Fig5b { m: i32, k: KnotType },
}

impl CatalogSpec {
    /// Every named entry with its default parameters.
    pub fn examples() -> Vec<CatalogSpec> {
        use CatalogSpec::*;
        vec![
            Unlink(1),
            Unlink(2),
            Unlink(3),
            Hopf(1),
            Hopf(-1),
            Hopf4(1),
            Hopf4(-1),
            Trefoil,
            Trefoil5,
            FigureEight,
            Whitehead,
            WhiteheadKinked,
            Borromean,
            Fig5a {
                m: 6,
                k1: KnotType::Trefoil,
                k2: KnotType::Trefoil,
            },
            Fig5b {
                m: 6,
                k: KnotType::Trefoil,
            },
        ]
    }

    pub fn description(&self) -> &'static str {
        match self {
            CatalogSpec::Unlink(_) => "n-component unlink, no crossings",
            CatalogSpec::Hopf(_) => "Hopf link, 2 crossings",
            CatalogSpec::Hopf4(_) => "Hopf link with one curl per component, 4 crossings",
            CatalogSpec::Trefoil => "right-handed trefoil, 3 crossings",
            CatalogSpec::Trefoil5 => "right-handed trefoil, 5 crossings",
            CatalogSpec::FigureEight => "figure-eight knot, 4 crossings",
            CatalogSpec::Whitehead => "Whitehead link, 6 crossings",
            CatalogSpec::WhiteheadKinked => "Whitehead link with a curl on each component",
            CatalogSpec::Borromean => "Borromean rings, 6 crossings",
            CatalogSpec::Fig5a { .. } => "2-component lk = 0 link with m full twists, mu_1122 = m",
            CatalogSpec::Fig5b { .. } => "3-component link, every pair a Fig5a pattern, mu_123 = +-1",
        }
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let bad = |msg: String| Err(DiagramError::UnsupportedSpec(msg));
        match *self {
            CatalogSpec::Unlink(n) if n == 0 || n > MAX_UNLINK => {
                bad(format!("unlink size {n} outside 1..={MAX_UNLINK}"))
            }
            CatalogSpec::Hopf(s) | CatalogSpec::Hopf4(s) if s != 1 && s != -1 => {
                bad(format!("sign {s} is not +1 or -1"))
            }
            CatalogSpec::Fig5a { m, .. } | CatalogSpec::Fig5b { m, .. } if m.abs() > MAX_TWISTS => {
                bad(format!("twist count {m} outside -{MAX_TWISTS}..={MAX_TWISTS}"))
            }
            _ => Ok(()),
        }
    }
}

fn sign_str(s: i8) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

impl fmt::Display for CatalogSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogSpec::Unlink(n) => write!(f, "unlink({n})"),
            CatalogSpec::Hopf(s) => write!(f, "hopf({})", sign_str(*s)),
            CatalogSpec::Hopf4(s) => write!(f, "hopf4({})", sign_str(*s)),
            CatalogSpec::Trefoil => write!(f, "trefoil"),
            CatalogSpec::Trefoil5 => write!(f, "trefoil5"),
            CatalogSpec::FigureEight => write!(f, "figure8"),
            CatalogSpec::Whitehead => write!(f, "whitehead"),
            CatalogSpec::WhiteheadKinked => write!(f, "whitehead-kinked"),
            CatalogSpec::Borromean => write!(f, "borromean"),
            CatalogSpec::Fig5a { m, k1, k2 } => {
                write!(f, "fig5a(m={m},k1={},k2={})", k1.name(), k2.name())
            }
            CatalogSpec::Fig5b { m, k } => write!(f, "fig5b(m={m},k={})", k.name()),
        }
    }
}

impl FromStr for CatalogSpec {
    type Err = DiagramError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s: String = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        let unsupported = || DiagramError::UnsupportedSpec(text.to_string());
        let (name, args) = match s.find('(') {
            Some(p) => {
                let inner = s[p + 1..].strip_suffix(')').ok_or_else(unsupported)?;
                (&s[..p], inner.to_string())
            }
            None => (s.as_str(), String::new()),
        };
        let args: Vec<&str> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',').collect()
        };
        // accepts both `v` and `key=v`
        let value = |key: &str, pos: usize| -> Option<&str> {
            args.iter()
                .find_map(|a| a.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
                .or_else(|| args.get(pos).filter(|a| !a.contains('=')).copied())
        };
        let sign = |pos: usize| -> Result<i8, DiagramError> {
            match value("sign", pos) {
                None | Some("+") | Some("+1") | Some("1") => Ok(1),
                Some("-") | Some("-1") => Ok(-1),
                Some(_) => Err(unsupported()),
            }
        };
        let int = |key: &str, pos: usize, default: i64| -> Result<i64, DiagramError> {
            value(key, pos).map_or(Ok(default), |v| v.parse().map_err(|_| unsupported()))
        };
        let knot = |key: &str, pos: usize| -> Result<KnotType, DiagramError> {
            value(key, pos).map_or(Ok(KnotType::Trefoil), str::parse)
        };
        let spec = match name {
            "unlink" => {
                let n = int("n", 0, 1)?;
                CatalogSpec::Unlink(usize::try_from(n).map_err(|_| unsupported())?)
            }
            "hopf" => CatalogSpec::Hopf(sign(0)?),
            "hopf4" => CatalogSpec::Hopf4(sign(0)?),
            "trefoil" => CatalogSpec::Trefoil,
            "trefoil5" => CatalogSpec::Trefoil5,
            "figure8" | "figureeight" => CatalogSpec::FigureEight,
            "whitehead" => CatalogSpec::Whitehead,
            "whitehead-kinked" | "whiteheadkinked" => CatalogSpec::WhiteheadKinked,
            "borromean" => CatalogSpec::Borromean,
            "fig5a" => CatalogSpec::Fig5a {
                m: i32::try_from(int("m", 0, 6)?).map_err(|_| unsupported())?,
                k1: knot("k1", 1)?,
                k2: knot("k2", 2)?,
            },
            "fig5b" => CatalogSpec::Fig5b {
                m: i32::try_from(int("m", 0, 6)?).map_err(|_| unsupported())?,
                k: knot("k", 1)?,
            },
            _ => return Err(unsupported()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Builds the diagram named by `spec`.
pub fn catalog_link(spec: &CatalogSpec) -> Result<LinkDiagram, DiagramError> {
    spec.validate()?;
    match *spec {
        CatalogSpec::Unlink(n) => Ok(LinkDiagram::unlink(n)),
        CatalogSpec::Hopf(s) => braid_closure(2, &[s as i32, s as i32]).build(),
        CatalogSpec::Hopf4(s) => hopf4(s),
        CatalogSpec::Trefoil => Ok(trefoil()),
        CatalogSpec::Trefoil5 => trefoil5(),
        CatalogSpec::FigureEight => Ok(figure_eight()),
        CatalogSpec::Whitehead => whitehead(false),
        CatalogSpec::WhiteheadKinked => whitehead(true),
        CatalogSpec::Borromean => braid_closure(3, &[1, -2, 1, -2, 1, -2]).build(),
        CatalogSpec::Fig5a { m, k1, k2 } => fig5a(m, k1, k2),
        CatalogSpec::Fig5b { m, k } => fig5b(m, k),
    }
}

/// Closure of a braid word; generator `i` (1-based) is positive, `-i` negative.
/// Strands run upwards, so a positive generator puts the strand from the
/// lower left on top.
fn braid_closure(strands: usize, word: &[i32]) -> PlanarBuilder {
    let mut b = PlanarBuilder::new();
    for j in 0..strands {
        b.cup(j);
    }
    for &g in word {
        b.cross(g.unsigned_abs() as usize - 1, g < 0);
    }
    for j in (0..strands).rev() {
        b.cap(j);
    }
    b
}

fn trefoil() -> LinkDiagram {
    braid_closure(2, &[1, 1, 1]).build().expect("fixed diagram")
}

fn figure_eight() -> LinkDiagram {
    braid_closure(3, &[1, -2, 1, -2]).build().expect("fixed diagram")
}

/// Half the signed count of crossings between components `i` and `j`.
fn lk(d: &LinkDiagram, i: usize, j: usize) -> i64 {
    let key = CrossingClass::Between(i.min(j), i.max(j));
    d.crossings()
        .iter()
        .filter(|c| d.crossing_class(c) == key)
        .map(|c| c.sign as i64)
        .sum::<i64>()
        / 2
}

/// Builds with both values of a flag and keeps the one passing `ok`.
fn calibrate<B, P>(build: B, ok: P) -> Result<LinkDiagram, DiagramError>
where
    B: Fn(bool) -> PlanarBuilder,
    P: Fn(&LinkDiagram) -> bool,
{
    for flag in [false, true] {
        let d = build(flag).build()?;
        if ok(&d) {
            return Ok(d);
        }
    }
    Err(DiagramError::UnsupportedSpec(
        "no crossing choice meets the calibration target".into(),
    ))
}

fn hopf4(s: i8) -> Result<LinkDiagram, DiagramError> {
    let target = |d: &LinkDiagram| {
        d.self_writhe(1) == Ok(1) && d.self_writhe(2) == Ok(-1) && lk(d, 1, 2) == s as i64
    };
    let build = |f1: bool, f2: bool| {
        let mut b = PlanarBuilder::new();
        b.cup(0).cup(1).kink(0, f1).kink(1, f2);
        b.cross(0, s < 0).cross(0, s < 0).cap(1).cap(0);
        b
    };
    for f1 in [false, true] {
        if let Ok(d) = calibrate(|f2| build(f1, f2), target) {
            return Ok(d);
        }
    }
    Err(DiagramError::UnsupportedSpec("hopf4 calibration failed".into()))
}

fn trefoil5() -> Result<LinkDiagram, DiagramError> {
    calibrate(
        |f| {
            let mut b = PlanarBuilder::new();
            b.cup(0).cup(1).cup(2).kink(0, f);
            for g in [1, 1, 1, 2] {
                b.cross(g - 1, false);
            }
            b.cap(2).cap(1).cap(0);
            b
        },
        |d| d.self_writhe(1) == Ok(3),
    )
}

/// Crossing flag of the twist region that makes `mu_1122` equal to `+m`.
const POSITIVE_TWIST_LEFT_OVER: bool = true;

/// Component 1 is a loop whose two sides pass through a twist region of
/// `twist_crossings` crossings; component 2 is a round loop clasping the
/// right side of component 1 above the twists and again below them, with
/// the second clasp chosen to cancel the linking number.
fn clasped_loop(
    twist_crossings: usize,
    twist_flag: bool,
    curls: bool,
) -> Result<LinkDiagram, DiagramError> {
    let build = |second: bool| {
        let mut b = PlanarBuilder::new();
        b.cup(0).cup(2);
        if curls {
            b.kink(0, false).kink(3, false);
        }
        b.cross(1, false).cross(1, false);
        for _ in 0..twist_crossings {
            b.cross(0, twist_flag);
        }
        b.cross(1, second).cross(1, second);
        b.cap(2).cap(0);
        b
    };
    calibrate(build, |d| d.component_count() == 2 && lk(d, 1, 2) == 0)
}

/// One full twist: the 6-crossing Whitehead diagram.
fn whitehead(curls: bool) -> Result<LinkDiagram, DiagramError> {
    clasped_loop(2, POSITIVE_TWIST_LEFT_OVER, curls)
}

/// The twisted Whitehead pattern with knots tied into both components.
fn fig5a(m: i32, k1: KnotType, k2: KnotType) -> Result<LinkDiagram, DiagramError> {
    let flag = if m >= 0 {
        POSITIVE_TWIST_LEFT_OVER
    } else {
        !POSITIVE_TWIST_LEFT_OVER
    };
    let mut d = clasped_loop(2 * m.unsigned_abs() as usize, flag, false)?;
    for (i, k) in [(1, k1), (2, k2)] {
        if let Some(knot) = k.diagram() {
            d = d.connected_sum(i, &knot, 1)?;
        }
    }
    Ok(d)
}

/// Joins `part` (two components) to components `i` and `j` of `base` by two
/// bands with no new crossings: first component of `part` into `i`, second
/// into `j`. Returns the first planar choice in edge order.
fn band_pair(
    base: &LinkDiagram,
    part: &LinkDiagram,
    i: usize,
    j: usize,
) -> Result<LinkDiagram, DiagramError> {
    let shift = base.max_label();
    let union = base.disjoint_union(part);
    let first: Vec<u32> = part.component_edges(1)?.iter().map(|e| e + shift).collect();
    for &e in base.component_edges(i)? {
        for &f in &first {
            let once = union.band_sum(e, f)?;
            // component indices of `base` survive the first band
            let n_base = base.component_count();
            let faces = once.faces();
            let targets = once.component_edges(j)?;
            let others = once.component_edges(n_base + 1)?;
            for &x in targets {
                for &y in others {
                    let same_side =
                        faces.left(x) == faces.left(y) || faces.right(x) == faces.right(y);
                    if same_side {
                        return once.band_sum(x, y);
                    }
                }
            }
        }
    }
    Err(DiagramError::IncompatibleBand(0, 0))
}

fn fig5b(m: i32, k: KnotType) -> Result<LinkDiagram, DiagramError> {
    let mut d = catalog_link(&CatalogSpec::Borromean)?;
    let pattern = fig5a(m, KnotType::Unknot, KnotType::Unknot)?;
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        d = band_pair(&d, &pattern, i, j)?;
    }
    if let Some(knot) = k.diagram() {
        for i in 1..=3 {
            d = d.connected_sum(i, &knot, 1)?;
        }
    }
    Ok(d)
}
