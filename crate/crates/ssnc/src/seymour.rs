//! Seymour-vertex bookkeeping: per-vertex reports, the sink and path-bound
//! lemma checkers, common-neighborhood counting, and the lambda ratio test
//! against the real root of 2x^3 + x^2 - 1.

use crate::digraph::{Digraph, Path, VertexSet};
use crate::error::GraphError;
use crate::properties::longest_path_within;
use serde::Serialize;
use std::sync::OnceLock;

/// Reduced non-negative fraction with exact cross-multiplication ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.max(1), den);
        Ratio { num: num / g, den: den / g }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl Serialize for Ratio {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.num, self.den))
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// d+(v) <= d++(v)?
pub fn is_seymour_vertex(d: &Digraph, v: usize) -> Result<bool, GraphError> {
    Ok(d.out_deg(v)? <= d.second_out_deg(v)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexRecord {
    pub v: usize,
    pub out_deg: usize,
    pub second_out_deg: usize,
    pub is_seymour: bool,
}

/// Full second-neighborhood census of a digraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeymourReport {
    pub records: Vec<VertexRecord>,
    pub seymour_vertices: VertexSet,
    /// max over v with d+(v) > 0 of d++(v) / d+(v); `None` when no vertex
    /// has positive out-degree.
    pub max_ratio: Option<Ratio>,
    /// min over v of d++(v) - d+(v). Negative throughout iff the digraph is
    /// a counterexample to the conjecture.
    pub min_slack: i64,
}

pub fn seymour_report(d: &Digraph) -> Result<SeymourReport, GraphError> {
    if d.n() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let mut records = Vec::with_capacity(d.n());
    let mut seymour = VertexSet::empty(d.n());
    let mut max_ratio: Option<Ratio> = None;
    let mut min_slack = i64::MAX;
    for v in d.vertices() {
        let out = d.out_deg(v)?;
        let second = d.second_out_deg(v)?;
        let is_sey = out <= second;
        if is_sey {
            seymour.insert(v);
        }
        if out > 0 {
            let r = Ratio::new(second as u64, out as u64);
            if max_ratio.map_or(true, |m| r > m) {
                max_ratio = Some(r);
            }
        }
        min_slack = min_slack.min(second as i64 - out as i64);
        records.push(VertexRecord { v, out_deg: out, second_out_deg: second, is_seymour: is_sey });
    }
    Ok(SeymourReport { records, seymour_vertices: seymour, max_ratio, min_slack })
}

/// Rational enclosure of the unique real root of 2x^3 + x^2 - 1 in (0, 1).
///
/// Both bounds share the denominator 2^41, giving an interval narrower than
/// 1e-12; comparisons against degree ratios stay in exact integers.
#[derive(Debug, Clone, Copy)]
pub struct LambdaEnclosure {
    num_lo: u64,
    num_hi: u64,
    log2_den: u32,
}

const LAMBDA_BITS: u32 = 41;

impl LambdaEnclosure {
    pub fn lo(&self) -> Ratio {
        Ratio::new(self.num_lo, 1u64 << self.log2_den)
    }

    pub fn hi(&self) -> Ratio {
        Ratio::new(self.num_hi, 1u64 << self.log2_den)
    }

    pub fn lo_f64(&self) -> f64 {
        self.num_lo as f64 / (1u64 << self.log2_den) as f64
    }

    pub fn hi_f64(&self) -> f64 {
        self.num_hi as f64 / (1u64 << self.log2_den) as f64
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo_f64() + self.hi_f64()) / 2.0
    }

    /// d++ >= hi * d+, the conservative direction: a pass here is a pass for
    /// the true constant.
    pub fn ratio_at_least_hi(&self, second: usize, out: usize) -> bool {
        (second as u128) << self.log2_den >= self.num_hi as u128 * out as u128
    }

    /// d++ >= lo * d+, the liberal direction.
    pub fn ratio_at_least_lo(&self, second: usize, out: usize) -> bool {
        (second as u128) << self.log2_den >= self.num_lo as u128 * out as u128
    }
}

/// Sign of 2x^3 + x^2 - 1 at x = p / 2^s, in exact integer arithmetic:
/// 2p^3 + p^2 2^s - 2^{3s}.
fn poly_sign(p: u64, s: u32) -> std::cmp::Ordering {
    let p = p as i128;
    let val = 2 * p * p * p + p * p * (1i128 << s) - (1i128 << (3 * s));
    val.cmp(&0)
}

/// Bisection to 41 binary digits. f(0) < 0 < f(1) and the cubic is strictly
/// increasing on (0, 1), so the bracket stays valid throughout.
fn bisect_lambda() -> LambdaEnclosure {
    let mut lo = 0u64;
    let mut hi = 1u64;
    for s in 1..=LAMBDA_BITS {
        // Rescale the previous bounds to denominator 2^s, then test the odd
        // midpoint between them.
        lo <<= 1;
        hi <<= 1;
        let mid = lo + 1;
        debug_assert_eq!(mid + 1, hi);
        match poly_sign(mid, s) {
            std::cmp::Ordering::Less => lo = mid,
            _ => hi = mid,
        }
    }
    LambdaEnclosure { num_lo: lo, num_hi: hi, log2_den: LAMBDA_BITS }
}

/// The shared enclosure, computed once.
pub fn lambda() -> &'static LambdaEnclosure {
    static CELL: OnceLock<LambdaEnclosure> = OnceLock::new();
    CELL.get_or_init(bisect_lambda)
}

/// Outcome of the lambda lower-bound test d++(v) >= lambda * d+(v).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaCheck {
    pub max_ratio: Option<Ratio>,
    /// Some vertex certifies the bound against the upper enclosure endpoint.
    pub passes: bool,
    /// No vertex clears the upper endpoint but one clears the lower: the
    /// verdict would depend on digits of lambda beyond the enclosure.
    pub marginal: bool,
}

pub fn lambda_ratio_check(d: &Digraph) -> Result<LambdaCheck, GraphError> {
    if d.n() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let lam = lambda();
    let mut passes = false;
    let mut lo_passes = false;
    let mut max_ratio: Option<Ratio> = None;
    for v in d.vertices() {
        let out = d.out_deg(v)?;
        let second = d.second_out_deg(v)?;
        if out == 0 {
            // A sink satisfies d++ >= lambda d+ = 0 outright.
            passes = true;
            lo_passes = true;
            continue;
        }
        let r = Ratio::new(second as u64, out as u64);
        if max_ratio.map_or(true, |m| r > m) {
            max_ratio = Some(r);
        }
        passes |= lam.ratio_at_least_hi(second, out);
        lo_passes |= lam.ratio_at_least_lo(second, out);
    }
    Ok(LambdaCheck { max_ratio, passes, marginal: !passes && lo_passes })
}

/// Result of the minimum-degree sink test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SinkResult {
    /// `sink` has no out-arc inside N+(v); `v_is_seymour` re-checks the
    /// promised conclusion directly.
    SinkFound { sink: usize, v_is_seymour: bool },
    NoSink,
}

/// Sink test at a minimum out-degree vertex: a sink x in D[N+(v)] pushes all
/// of N+(x) outside N+(v), forcing d++(v) >= d+(v).
///
/// An empty out-neighborhood reports `NoSink` rather than an error; the
/// hypothesis d+(v) = min out-degree is checked.
pub fn check_sink_lemma(d: &Digraph, v: usize) -> Result<SinkResult, GraphError> {
    let (_, delta) = d.min_out_deg_vertex()?;
    let dv = d.out_deg(v)?;
    if dv != delta {
        return Err(GraphError::HypothesisViolated(format!(
            "vertex {v} has out-degree {dv}, minimum is {delta}"
        )));
    }
    let nbhd = d.out_nbrs(v)?;
    for x in nbhd.iter() {
        if d.restricted_out_deg(x, &nbhd)? == 0 {
            let v_is_seymour = is_seymour_vertex(d, v)?;
            return Ok(SinkResult::SinkFound { sink: x, v_is_seymour });
        }
    }
    Ok(SinkResult::NoSink)
}

/// Longest simple path inside D[N+(v)], in original labels. Length 0 with a
/// single-vertex (or empty) witness when the neighborhood induces no arcs.
pub fn longest_path_in_out_nbhd(d: &Digraph, v: usize) -> Result<(usize, Path), GraphError> {
    let nbhd = d.out_nbrs(v)?;
    Ok(longest_path_within(d, &nbhd))
}

/// In a k-anti-transitive digraph no out-neighborhood induces a path longer
/// than k - 2. Returns true when every vertex satisfies the bound.
pub fn check_path_bound_lemma(d: &Digraph, k: usize) -> Result<bool, GraphError> {
    if !crate::properties::is_k_anti_transitive(d, k)? {
        return Err(GraphError::HypothesisViolated(format!(
            "digraph is not {k}-anti-transitive"
        )));
    }
    for v in d.vertices() {
        let (len, _) = longest_path_in_out_nbhd(d, v)?;
        if len > k - 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Common out-neighbors of every vertex in `vs`, restricted to the outside
/// of `r`: the intersection over `vs` of N+(.) minus `r`.
pub fn common_out_nbrs_outside(
    d: &Digraph,
    r: &VertexSet,
    vs: &[usize],
) -> Result<VertexSet, GraphError> {
    if r.ambient() != d.n() {
        return Err(GraphError::BadParam(format!(
            "vertex set over ambient {} applied to digraph on {}",
            r.ambient(),
            d.n()
        )));
    }
    if vs.len() < 2 || vs.len() > 3 {
        return Err(GraphError::BadParam(format!(
            "common-neighborhood bound applies to 2 or 3 vertices, got {}",
            vs.len()
        )));
    }
    for &v in vs {
        if v >= d.n() {
            return Err(GraphError::OutOfRange { vertex: v, n: d.n() });
        }
        if !r.contains(v) {
            return Err(GraphError::BadParam(format!("vertex {v} is not in the base set")));
        }
    }
    let mut acc = d.out_nbrs(vs[0])?;
    for &v in &vs[1..] {
        acc.intersect_with(&d.out_nbrs(v)?);
    }
    acc.subtract(r);
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonNbrViolation {
    pub vertices: Vec<usize>,
    pub common_outside: usize,
    pub lower_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommonNbrReport {
    pub v: usize,
    pub delta: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<CommonNbrViolation>,
}

/// Checks both common-out-neighbor lower bounds over R = N+(v):
/// pairs   |N+_out(ri, rj)|      >= delta + 1 - d_R(ri) - d_R(rj)
/// triples |N+_out(ri, rj, rk)|  >= delta + 2 - d_R(ri) - d_R(rj) - d_R(rk)
/// under the hypothesis d+(v) = delta and d++(v) <= delta - 1.
pub fn check_common_nbr_bounds(d: &Digraph, v: usize) -> Result<CommonNbrReport, GraphError> {
    let (_, delta) = d.min_out_deg_vertex()?;
    let dv = d.out_deg(v)?;
    if dv != delta {
        return Err(GraphError::HypothesisViolated(format!(
            "vertex {v} has out-degree {dv}, minimum is {delta}"
        )));
    }
    let second = d.second_out_deg(v)?;
    if second + 1 > delta {
        return Err(GraphError::HypothesisViolated(format!(
            "need d++({v}) <= delta - 1, got {second} with delta {delta}"
        )));
    }
    let r = d.out_nbrs(v)?;
    let members: Vec<usize> = r.to_vec();
    let rdeg: Vec<usize> = members
        .iter()
        .map(|&x| d.restricted_out_deg(x, &r))
        .collect::<Result<_, _>>()?;
    let mut report = CommonNbrReport {
        v,
        delta,
        pairs_checked: 0,
        triples_checked: 0,
        violations: Vec::new(),
    };
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            report.pairs_checked += 1;
            let common = common_out_nbrs_outside(d, &r, &[members[i], members[j]])?.card();
            let bound = delta as i64 + 1 - rdeg[i] as i64 - rdeg[j] as i64;
            if (common as i64) < bound {
                report.violations.push(CommonNbrViolation {
                    vertices: vec![members[i], members[j]],
                    common_outside: common,
                    lower_bound: bound,
                });
            }
            for k in j + 1..members.len() {
                report.triples_checked += 1;
                let common =
                    common_out_nbrs_outside(d, &r, &[members[i], members[j], members[k]])?.card();
                let bound =
                    delta as i64 + 2 - rdeg[i] as i64 - rdeg[j] as i64 - rdeg[k] as i64;
                if (common as i64) < bound {
                    report.violations.push(CommonNbrViolation {
                        vertices: vec![members[i], members[j], members[k]],
                        common_outside: common,
                        lower_bound: bound,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Digraph {
        Digraph::build(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn tt3() -> Digraph {
        Digraph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn c5() -> Digraph {
        Digraph::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn seymour_vertex_examples() {
        // C3: every vertex has d+ = d++ = 1.
        for v in 0..3 {
            assert!(is_seymour_vertex(&c3(), v).unwrap());
        }
        // TT3: only the sink qualifies.
        assert!(!is_seymour_vertex(&tt3(), 0).unwrap());
        assert!(!is_seymour_vertex(&tt3(), 1).unwrap());
        assert!(is_seymour_vertex(&tt3(), 2).unwrap());
    }

    #[test]
    fn report_examples() {
        let rep = seymour_report(&c5()).unwrap();
        assert_eq!(rep.seymour_vertices.card(), 5);
        assert_eq!(rep.max_ratio, Some(Ratio::new(1, 1)));
        assert_eq!(rep.min_slack, 0);

        let rep = seymour_report(&tt3()).unwrap();
        assert_eq!(rep.seymour_vertices.to_vec(), vec![2]);
        assert_eq!(rep.max_ratio, Some(Ratio::new(0, 1)));
        assert_eq!(rep.min_slack, -2);

        assert_eq!(
            seymour_report(&Digraph::build(0, &[]).unwrap()),
            Err(GraphError::EmptyGraph)
        );
    }

    #[test]
    fn ratio_ordering() {
        assert!(Ratio::new(2, 3) < Ratio::new(3, 4));
        assert_eq!(Ratio::new(4, 6), Ratio::new(2, 3));
        assert!(Ratio::new(0, 5) < Ratio::new(1, 100));
    }

    #[test]
    fn lambda_enclosure_is_tight_and_bracketing() {
        let lam = lambda();
        let width = lam.hi_f64() - lam.lo_f64();
        assert!(width <= 1e-12, "width {width}");
        let mid = lam.midpoint_f64();
        let residual = (2.0 * mid.powi(3) + mid.powi(2) - 1.0).abs();
        assert!(residual <= 1e-10, "residual {residual}");
        assert!(lam.lo_f64() > 0.657 && lam.hi_f64() < 0.6575);
        // Exact sign checks at the bounds.
        assert_eq!(poly_sign(lam.num_lo, LAMBDA_BITS), std::cmp::Ordering::Less);
        assert_ne!(poly_sign(lam.num_hi, LAMBDA_BITS), std::cmp::Ordering::Less);
    }

    #[test]
    fn lambda_check_examples() {
        // C3: ratio 1 >= lambda at every vertex.
        let chk = lambda_ratio_check(&c3()).unwrap();
        assert!(chk.passes && !chk.marginal);
        // TT3: the sink passes vacuously.
        assert!(lambda_ratio_check(&tt3()).unwrap().passes);
        // Star 0 -> {1,2,3}: leaves are sinks, pass.
        let star = Digraph::build(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(lambda_ratio_check(&star).unwrap().passes);
    }

    #[test]
    fn sink_lemma_examples() {
        // C5 at v = 0: N+(0) = {1} induces no arcs, so 1 is a sink.
        match check_sink_lemma(&c5(), 0).unwrap() {
            SinkResult::SinkFound { sink, v_is_seymour } => {
                assert_eq!(sink, 1);
                assert!(v_is_seymour);
            }
            SinkResult::NoSink => panic!("expected a sink"),
        }
        // TT3 at the minimum vertex 2: empty neighborhood, NoSink by
        // convention rather than an error.
        assert_eq!(check_sink_lemma(&tt3(), 2).unwrap(), SinkResult::NoSink);
        // C3 plus an isolated-ish vertex fed by 0: minimum is at 3, so the
        // hypothesis fails at 0.
        let g = Digraph::build(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap();
        assert!(matches!(
            check_sink_lemma(&g, 0),
            Err(GraphError::HypothesisViolated(_))
        ));
        assert_eq!(check_sink_lemma(&g, 3).unwrap(), SinkResult::NoSink);
    }

    #[test]
    fn longest_nbhd_path_examples() {
        // TT3 at 0: N+(0) = {1, 2} with the arc 1 -> 2.
        let (len, p) = longest_path_in_out_nbhd(&tt3(), 0).unwrap();
        assert_eq!(len, 1);
        assert_eq!(p.vertices(), &[1, 2]);
        // C5 at 0: singleton neighborhood.
        let (len, p) = longest_path_in_out_nbhd(&c5(), 0).unwrap();
        assert_eq!(len, 0);
        assert_eq!(p.vertices(), &[1]);
        // v -> {1,2,3} with the chain 1 -> 2 -> 3 inside.
        let g = Digraph::build(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).unwrap();
        let (len, p) = longest_path_in_out_nbhd(&g, 0).unwrap();
        assert_eq!(len, 2);
        assert_eq!(p.vertices(), &[1, 2, 3]);
        // That chain plus the closing arc is exactly a 3-anti-transitivity
        // violation at (0, 3).
        assert!(!crate::properties::is_k_anti_transitive(&g, 3).unwrap());
    }

    #[test]
    fn path_bound_lemma_examples() {
        assert!(check_path_bound_lemma(&c5(), 3).unwrap());
        assert!(matches!(
            check_path_bound_lemma(&tt3(), 2),
            Err(GraphError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn common_outside_examples() {
        // 0 -> {1,2}, 1 -> 3, 2 -> 3: outside common neighborhood of {1,2}
        // over R = {1,2} is {3}.
        let g = Digraph::build(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let r = g.out_nbrs(0).unwrap();
        assert_eq!(
            common_out_nbrs_outside(&g, &r, &[1, 2]).unwrap().to_vec(),
            vec![3]
        );
        // Disjoint targets give the empty set.
        let h = Digraph::build(5, &[(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap();
        let r = h.out_nbrs(0).unwrap();
        assert!(common_out_nbrs_outside(&h, &r, &[1, 2]).unwrap().is_empty());
        // Arity and membership are validated.
        assert!(matches!(
            common_out_nbrs_outside(&g, &r, &[1]),
            Err(GraphError::BadParam(_))
        ));
        assert!(matches!(
            common_out_nbrs_outside(&g, &r, &[0, 1]),
            Err(GraphError::BadParam(_))
        ));
    }

    #[test]
    fn common_nbr_bounds_hypothesis_gate() {
        // TT3 at 0: d+(0) = 2 but delta = 0.
        assert!(matches!(
            check_common_nbr_bounds(&tt3(), 0),
            Err(GraphError::HypothesisViolated(_))
        ));
        // C3 at 0: delta = 1, but d++(0) = 1 > delta - 1.
        assert!(matches!(
            check_common_nbr_bounds(&c3(), 0),
            Err(GraphError::HypothesisViolated(_))
        ));
    }

    /// A hand-wired digraph satisfying the hypothesis: v = 0 with R = {1,2,3}
    /// a directed triangle, every R-vertex pointing at the shared outside
    /// pair {4,5}, and the remainder wired to keep delta at 3.
    #[test]
    fn common_nbr_bounds_on_satisfying_instance() {
        let arcs = [
            (0, 1), (0, 2), (0, 3),
            (1, 2), (2, 3), (3, 1),
            (1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (3, 5),
            (4, 0), (4, 5), (4, 6),
            (5, 0), (5, 6), (5, 7),
            (6, 0), (6, 1), (6, 7),
            (7, 0), (7, 1), (7, 2),
        ];
        let g = Digraph::build(8, &arcs).unwrap();
        assert_eq!(g.min_out_deg_vertex().unwrap(), (0, 3));
        assert_eq!(g.second_out_deg(0).unwrap(), 2);
        let rep = check_common_nbr_bounds(&g, 0).unwrap();
        assert_eq!(rep.pairs_checked, 3);
        assert_eq!(rep.triples_checked, 1);
        assert!(rep.violations.is_empty(), "violations: {:?}", rep.violations);
    }
}
