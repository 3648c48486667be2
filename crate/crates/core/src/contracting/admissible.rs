//! `(L, τ)`-admissible paths and the extension lemma.

use std::fmt;

use super::axis::{projection_diameter, Axis};
use crate::error::{Error, Result};
use crate::group::GroupOracle;
use crate::word::Word;

/// A geodesic piece `p_i` with its axis `A_i`. The end pieces may be trivial
/// and carry no axis.
#[derive(Clone, Debug)]
pub struct AxisSegment {
    pub path: Vec<Word>,
    pub axis: Option<Axis>,
}

/// `p_0 q_1 p_1 ... q_n p_n`.
#[derive(Clone, Debug)]
pub struct AdmissiblePathSpec {
    pub pieces: Vec<AxisSegment>,
    pub connectors: Vec<Vec<Word>>,
    pub l: f64,
    pub tau: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// (LL): pieces longer than `L`.
    LongLocal,
    /// (BP): bounded projections of the neighbouring connectors.
    BoundedProjection,
    /// Consecutive axes must differ.
    DistinctAxes,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::LongLocal => "LL",
            Clause::BoundedProjection => "BP",
            Clause::DistinctAxes => "distinct-axes",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub clause: Clause,
    pub segment: usize,
    pub measured: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AdmissibleReport {
    pub violations: Vec<Violation>,
}

impl AdmissibleReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for AdmissibleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "admissible");
        }
        for v in &self.violations {
            writeln!(f, "clause={} segment={} measured={} threshold={}", v.clause, v.segment, v.measured, v.threshold)?;
        }
        Ok(())
    }
}

fn is_geodesic(oracle: &GroupOracle, path: &[Word]) -> Result<bool> {
    for pair in path.windows(2) {
        if oracle.distance(&pair[0], &pair[1])? != 1 {
            return Ok(false);
        }
    }
    Ok(oracle.distance(&path[0], &path[path.len() - 1])? + 1 == path.len())
}

impl AdmissiblePathSpec {
    fn validate(&self, oracle: &GroupOracle) -> Result<()> {
        let bad = |msg: String| Err(Error::Input(format!("malformed admissible path: {msg}")));
        if self.pieces.is_empty() || self.pieces.len() != self.connectors.len() + 1 {
            return bad(format!("{} pieces and {} connectors", self.pieces.len(), self.connectors.len()));
        }
        let segments = self.segments();
        for (i, seg) in segments.iter().enumerate() {
            if seg.is_empty() {
                return bad(format!("segment {i} is empty"));
            }
            if !is_geodesic(oracle, seg)? {
                return bad(format!("segment {i} is not a geodesic"));
            }
        }
        for (i, pair) in segments.windows(2).enumerate() {
            if pair[0].last() != pair[1].first() {
                return bad(format!("segments {i} and {} do not meet", i + 1));
            }
        }
        let n = self.pieces.len() - 1;
        for (i, piece) in self.pieces.iter().enumerate() {
            match &piece.axis {
                Some(axis) => {
                    let (s, e) = (&piece.path[0], &piece.path[piece.path.len() - 1]);
                    if !axis.contains(s) || !axis.contains(e) {
                        return bad(format!("endpoints of piece {i} are off {axis}"));
                    }
                }
                None if piece.path.len() == 1 && (i == 0 || i == n) => {}
                None => return bad(format!("piece {i} has no axis")),
            }
        }
        Ok(())
    }

    /// `p_0, q_1, p_1, ...` in order.
    pub fn segments(&self) -> Vec<&[Word]> {
        let mut out: Vec<&[Word]> = Vec::with_capacity(2 * self.pieces.len());
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                out.push(&self.connectors[i - 1]);
            }
            out.push(&p.path);
        }
        out
    }

    /// Vertices of the concatenated path, junctions listed once.
    pub fn vertices(&self) -> Vec<Word> {
        let mut out: Vec<Word> = Vec::new();
        for seg in self.segments() {
            let skip = usize::from(!out.is_empty());
            out.extend(seg[skip..].iter().cloned());
        }
        out
    }
}

/// Check (LL), (BP) and distinctness of consecutive axes.
///
/// (LL) applies to every nontrivial piece, the end pieces included; a
/// trivial end piece is exempt. (BP) uses `q_0 = γ-` and `q_{n+1} = γ+`.
pub fn admissible_check(oracle: &GroupOracle, spec: &AdmissiblePathSpec) -> Result<AdmissibleReport> {
    spec.validate(oracle)?;
    let n = spec.pieces.len() - 1;
    let vertices = spec.vertices();
    let start = [vertices[0].clone()];
    let end = [vertices[vertices.len() - 1].clone()];
    let mut report = AdmissibleReport::default();
    for (i, piece) in spec.pieces.iter().enumerate() {
        let len = piece.path.len() - 1;
        let exempt = len == 0 && (i == 0 || i == n);
        if !exempt && len as f64 <= spec.l {
            report.violations.push(Violation {
                clause: Clause::LongLocal,
                segment: i,
                measured: len as f64,
                threshold: spec.l,
            });
        }
        let Some(axis) = &piece.axis else { continue };
        let before: &[Word] = if i == 0 { &start } else { &spec.connectors[i - 1] };
        let after: &[Word] = if i == n { &end } else { &spec.connectors[i] };
        let diam = projection_diameter(oracle, axis, before)?.max(projection_diameter(oracle, axis, after)?);
        if diam as f64 > spec.tau {
            report.violations.push(Violation {
                clause: Clause::BoundedProjection,
                segment: i,
                measured: diam as f64,
                threshold: spec.tau,
            });
        }
        if let Some(next) = spec.pieces.get(i + 1).and_then(|p| p.axis.as_ref()) {
            if axis.same_set(next) {
                report.violations.push(Violation {
                    clause: Clause::DistinctAxes,
                    segment: i,
                    measured: 0.0,
                    threshold: 0.0,
                });
            }
        }
    }
    Ok(report)
}

/// Least `λ >= 1` with `ℓ(sub) <= λ d(ends) + λ` for every subpath.
pub fn quasi_geodesic_constant(oracle: &GroupOracle, path: &[Word]) -> Result<f64> {
    let mut lambda: f64 = 1.0;
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            let d = oracle.distance(&path[i], &path[j])?;
            lambda = lambda.max((j - i) as f64 / (d + 1) as f64);
        }
    }
    Ok(lambda)
}

/// `x · [1, w]`.
pub fn translated_geodesic(oracle: &GroupOracle, x: &Word, w: &Word) -> Result<Vec<Word>> {
    oracle.geodesic(w)?.iter().map(|p| oracle.multiply(x, p)).collect()
}

/// Pairwise independent axes for the extension lemma.
#[derive(Clone, Debug)]
pub struct ExtensionSet {
    axes: Vec<Axis>,
    /// Largest projection diameter of one axis onto another seen during the
    /// independence check.
    pub projection_bound: usize,
}

/// Orbit windows used to test that projections between axes stay bounded.
const INDEPENDENCE_WINDOWS: (usize, usize) = (4, 8);

impl ExtensionSet {
    /// Reject `F` unless its axes are pairwise distinct and each projects to
    /// a bounded set on the others: the diameter must not grow between two
    /// window sizes.
    pub fn new(oracle: &GroupOracle, elements: &[Word]) -> Result<ExtensionSet> {
        if elements.len() != 3 {
            return Err(Error::Input(format!("the extension set needs 3 elements, got {}", elements.len())));
        }
        let axes: Vec<Axis> = elements.iter().map(|f| Axis::new(oracle, f)).collect::<Result<_>>()?;
        let mut bound = 0;
        for (i, a) in axes.iter().enumerate() {
            for (j, b) in axes.iter().enumerate() {
                if i == j {
                    continue;
                }
                if a.same_set(b) {
                    return Err(Error::Input(format!("{a} and {b} are the same axis")));
                }
                let small = projection_diameter(oracle, a, &b.window(INDEPENDENCE_WINDOWS.0))?;
                let large = projection_diameter(oracle, a, &b.window(INDEPENDENCE_WINDOWS.1))?;
                if large > small {
                    return Err(Error::Input(format!("{b} has unbounded projection to {a}")));
                }
                bound = bound.max(large);
            }
        }
        Ok(ExtensionSet { axes, projection_bound: bound })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn max_length(&self) -> usize {
        self.axes.iter().map(|a| a.element().len()).max().unwrap_or(0)
    }
}

/// The labelled path of `g1 f g2` cut as `[o] · [1,g1] · g1[1,f] · g1 f[1,g2]`.
pub fn extension_path(
    oracle: &GroupOracle,
    g1: &Word,
    f: &Axis,
    g2: &Word,
    l: f64,
    tau: f64,
) -> Result<AdmissiblePathSpec> {
    let g1 = oracle.normal_form(g1)?;
    let g1f = oracle.multiply(&g1, f.element())?;
    let end = oracle.multiply(&g1f, g2)?;
    Ok(AdmissiblePathSpec {
        pieces: vec![
            AxisSegment { path: vec![Word::identity()], axis: None },
            AxisSegment { path: translated_geodesic(oracle, &g1, f.element())?, axis: Some(f.translated(oracle, &g1)?) },
            AxisSegment { path: vec![end], axis: None },
        ],
        connectors: vec![oracle.geodesic(&g1)?, translated_geodesic(oracle, &g1f, g2)?],
        l,
        tau,
    })
}

/// The first `f` in `F` whose path `g1 f g2` is `(L, τ)`-admissible.
pub fn extension_choose(
    oracle: &GroupOracle,
    g1: &Word,
    g2: &Word,
    set: &ExtensionSet,
    l: f64,
    tau: f64,
) -> Result<(Word, AdmissiblePathSpec)> {
    let mut reports = Vec::new();
    for axis in set.axes() {
        let spec = extension_path(oracle, g1, axis, g2, l, tau)?;
        let report = admissible_check(oracle, &spec)?;
        if report.is_admissible() {
            return Ok((axis.element().clone(), spec));
        }
        reports.push(format!("f={}: {}", axis.element(), report.to_string().trim_end().replace('\n', "; ")));
    }
    Err(Error::Exhausted(format!("no f admissible for g1={g1}, g2={g2}: {}", reports.join(" | "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn f2() -> GroupOracle {
        GroupOracle::free(2).unwrap()
    }

    fn two_piece(g: &GroupOracle, l: f64, second_translate: &str) -> AdmissiblePathSpec {
        let ax = Axis::new(g, &w("a")).unwrap();
        let a10 = w("a^10");
        let a10b = g.multiply(&a10, &w("b")).unwrap();
        let t = w(second_translate);
        AdmissiblePathSpec {
            pieces: vec![
                AxisSegment { path: g.geodesic(&a10).unwrap(), axis: Some(ax.clone()) },
                AxisSegment { path: translated_geodesic(g, &a10b, &a10).unwrap(), axis: Some(ax.translated(g, &t).unwrap()) },
            ],
            connectors: vec![translated_geodesic(g, &a10, &w("b")).unwrap()],
            l,
            tau: 1.0,
        }
    }

    #[test]
    fn two_axes_joined_by_b() {
        let g = f2();
        let spec = two_piece(&g, 5.0, "a^10b");
        let report = admissible_check(&g, &spec).unwrap();
        assert!(report.is_admissible(), "{report}");
        assert_eq!(quasi_geodesic_constant(&g, &spec.vertices()).unwrap(), 1.0);
        let report = admissible_check(&g, &two_piece(&g, 11.0, "a^10b")).unwrap();
        assert!(report.violations.iter().all(|v| v.clause == Clause::LongLocal));
        assert_eq!(report.violations.len(), 2);
        assert_eq!(report.violations[0].measured, 10.0);
    }

    #[test]
    fn equal_consecutive_axes_are_rejected() {
        let g = f2();
        let ax = Axis::new(&g, &w("a")).unwrap();
        let spec = AdmissiblePathSpec {
            pieces: vec![
                AxisSegment { path: g.geodesic(&w("a^6")).unwrap(), axis: Some(ax.clone()) },
                AxisSegment { path: translated_geodesic(&g, &w("a^6"), &w("a^6")).unwrap(), axis: Some(ax) },
            ],
            connectors: vec![vec![w("a^6")]],
            l: 3.0,
            tau: 1.0,
        };
        let report = admissible_check(&g, &spec).unwrap();
        assert!(report.violations.iter().any(|v| v.clause == Clause::DistinctAxes));
    }

    #[test]
    fn malformed_specs() {
        let g = f2();
        let mut spec = two_piece(&g, 5.0, "a^10b");
        spec.connectors[0] = vec![w("a^10"), w("a^10bb")];
        assert!(matches!(admissible_check(&g, &spec), Err(Error::Input(_))));
        let spec = two_piece(&g, 5.0, "b");
        assert!(matches!(admissible_check(&g, &spec), Err(Error::Input(_))));
    }

    #[test]
    fn quasi_geodesic_constants() {
        let g = f2();
        assert_eq!(quasi_geodesic_constant(&g, &g.geodesic(&w("abAB")).unwrap()).unwrap(), 1.0);
        let back = [w(""), w("a"), w(""), w("a")];
        assert_eq!(quasi_geodesic_constant(&g, &back).unwrap(), 2.0);
        assert_eq!(quasi_geodesic_constant(&g, &[w("")]).unwrap(), 1.0);
    }

    #[test]
    fn extension_set_construction() {
        let g = f2();
        let set = ExtensionSet::new(&g, &[w("a"), w("baB"), w("bbaBB")]).unwrap();
        assert_eq!(set.max_length(), 5);
        assert!(matches!(ExtensionSet::new(&g, &[w("a"), w("aa"), w("b")]), Err(Error::Input(_))));
        assert!(matches!(ExtensionSet::new(&g, &[w("a"), w("b")]), Err(Error::Input(_))));
    }

    #[test]
    fn choosing_an_extension() {
        let g = f2();
        let set = ExtensionSet::new(&g, &[w("a"), w("baB"), w("bbaBB")]).unwrap();
        let (f, spec) = extension_choose(&g, &w("b^5"), &w("b^5"), &set, 0.0, 2.0).unwrap();
        assert!(admissible_check(&g, &spec).unwrap().is_admissible());
        assert_eq!(f, w("a"));
        let (f, _) = extension_choose(&g, &w(""), &w(""), &set, 0.0, 2.0).unwrap();
        assert_eq!(f, w("a"));
        // |f| must exceed L.
        let long = ExtensionSet::new(&g, &[w("a^6"), w("ba^6B"), w("bba^6BB")]).unwrap();
        let (f, _) = extension_choose(&g, &w("b^5"), &w("b^5"), &long, 5.0, 2.0).unwrap();
        assert_eq!(f, w("a^6"));
        let res = extension_choose(&g, &w("b^5"), &w("b^5"), &set, 5.0, 2.0);
        assert!(matches!(res, Err(Error::Exhausted(_))));
    }
}
