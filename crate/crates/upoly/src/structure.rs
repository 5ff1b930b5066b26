//! Critical-value structure of a polynomial: cluster the roots of P' by
//! their P-value with certification, lay the points out in the two tables
//! (points and multiplicities), and derive the per-column filtered sets that
//! feed the decision rules.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::ball::ComplexBall;
use crate::error::{Error, Result};
use crate::field::{ExactScalar, Field};
use crate::poly::Poly;
use crate::report::{
    BallJson, ColumnJson, MemberJson, ScalarJson, StructureJson, STRUCTURE_SCHEMA,
};
use crate::roots::{isolate_roots, refine, sort_key_compare, Precision, RootEnclosure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified,
    UncertifiedNumeric,
}

impl Certification {
    pub fn label(&self) -> &'static str {
        match self {
            Certification::Certified => "Certified",
            Certification::UncertifiedNumeric => "UncertifiedNumeric",
        }
    }
}

/// A distinct root d of P' with its multiplicity q and an enclosure (exact
/// where possible) of the critical value P(d).
#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub root: RootEnclosure,
    pub q: usize,
    pub value_ball: ComplexBall,
    pub exact_value: Option<ExactScalar>,
}

/// Per-column filtered multiplicity sets. `a` holds the unrepeated q-values;
/// `a_h1` those of them dominating every repeated q (decreasing); `a_h2` the
/// ones within the factor-2 band of the column maximum. The `b` lists hold
/// the corresponding member indices.
#[derive(Clone, Debug, Default)]
pub struct ColumnDerived {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub a_h1: Vec<usize>,
    pub a_h2: Vec<usize>,
    pub b_h2: Vec<usize>,
    pub n_i: usize,
}

/// One column of the tables: all critical points sharing one critical value.
#[derive(Clone, Debug)]
pub struct ValueClass {
    pub members: Vec<CriticalPoint>,
    pub class_value: ComplexBall,
    pub exact_class_value: Option<ExactScalar>,
    pub q_sum: usize,
    pub derived: ColumnDerived,
}

#[derive(Clone, Debug)]
pub struct StructureReport {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub columns: Vec<ValueClass>,
    pub row_sizes: Vec<usize>,
    pub t: usize,
    pub t_prime: usize,
    pub is_cip: bool,
    pub p_squarefree: bool,
    pub certification: Certification,
}

pub fn build_structure(p: &Poly) -> Result<StructureReport> {
    build_structure_with(p, Precision::default())
}

pub fn build_structure_with(p: &Poly, prec: Precision) -> Result<StructureReport> {
    let n = match p.degree() {
        None | Some(0) => return Err(Error::Unsupported("constant polynomial".into())),
        Some(n) => n,
    };
    let field = p.field().clone();
    let dp = p.derivative();
    let p_squarefree = p.gcd(&dp)?.is_constant();
    if dp.is_constant() {
        return Ok(StructureReport {
            field,
            n,
            k: 0,
            s: 0,
            columns: Vec::new(),
            row_sizes: Vec::new(),
            t: 0,
            t_prime: 0,
            is_cip: true,
            p_squarefree,
            certification: Certification::Certified,
        });
    }

    let iso = isolate_roots(&dp, &radius_for(prec.initial), prec)?;
    let k = iso.enclosures.len();
    let points: Vec<CriticalPoint> = iso
        .enclosures
        .into_iter()
        .map(|root| {
            let q = root.multiplicity();
            let (value_ball, exact_value) = match root.exact_value() {
                Some(d) => {
                    let v = p.eval(d);
                    (v.embed(prec.initial), Some(v))
                }
                None => {
                    let bits = root.ball().precision_bits();
                    (p.eval_ball(root.ball(), bits), None)
                }
            };
            CriticalPoint { root, q, value_ball, exact_value }
        })
        .collect();

    let groups = cluster_critical_values(points, p, prec)?;

    let mut columns: Vec<ValueClass> = groups
        .into_iter()
        .map(|mut members| {
            members.sort_by(|a, b| sort_key_compare(&a.root, &b.root));
            let exact_class_value = members.iter().find_map(|m| m.exact_value.clone());
            if let Some(v) = &exact_class_value {
                for m in &members {
                    if let Some(w) = &m.exact_value {
                        if w != v {
                            return Err(Error::Internal(
                                "clustered points with unequal exact values".into(),
                            ));
                        }
                    }
                }
            }
            let class_value = members
                .iter()
                .min_by(|a, b| a.value_ball.rad().cmp_dyadic(b.value_ball.rad()))
                .expect("nonempty class")
                .value_ball
                .clone();
            let q_sum = members.iter().map(|m| m.q).sum();
            let derived = compute_h_sets(&members.iter().map(|m| m.q).collect::<Vec<_>>());
            Ok(ValueClass { members, class_value, exact_class_value, q_sum, derived })
        })
        .collect::<Result<_>>()?;

    columns.sort_by(|a, b| {
        a.members
            .len()
            .cmp(&b.members.len())
            .then_with(|| sort_key_compare(&a.members[0].root, &b.members[0].root))
    });

    let s = columns.iter().map(|c| c.members.len()).max().unwrap_or(0);
    let row_sizes: Vec<usize> = (1..=s)
        .map(|l| columns.iter().filter(|c| c.members.len() >= s - l + 1).count())
        .collect();

    let t = columns.iter().filter(|c| !c.derived.b_h2.is_empty()).count();
    let t_prime = columns.iter().map(|c| c.derived.b_h2.len()).sum();
    let all_singleton = columns.iter().all(|c| c.members.len() == 1);
    let is_cip = all_singleton;
    if is_cip != (t == t_prime && t_prime == k) {
        return Err(Error::Internal(format!(
            "injectivity flags disagree: singleton-columns {is_cip}, t={t}, t'={t_prime}, k={k}"
        )));
    }

    Ok(StructureReport {
        field,
        n,
        k,
        s,
        columns,
        row_sizes,
        t,
        t_prime,
        is_cip,
        p_squarefree,
        certification: Certification::Certified,
    })
}

fn radius_for(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << (bits / 2))
}

/// Group critical points by critical value. When every value is exact the
/// grouping is settled by exact comparison. Otherwise the count of overlap
/// components is driven down by refinement until it matches the number of
/// distinct roots of D(y) = Res_x(P(x)−y, P'(x)), which certifies the
/// partition; the component q-sums are then cross-checked against the
/// exponent multiset of D's squarefree decomposition.
pub fn cluster_critical_values(
    points: Vec<CriticalPoint>,
    p: &Poly,
    prec: Precision,
) -> Result<Vec<Vec<CriticalPoint>>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    if points.iter().all(|pt| pt.exact_value.is_some()) {
        let mut groups: Vec<Vec<CriticalPoint>> = Vec::new();
        'outer: for pt in points {
            let v = pt.exact_value.as_ref().unwrap();
            for g in &mut groups {
                if g[0].exact_value.as_ref().unwrap() == v {
                    g.push(pt);
                    continue 'outer;
                }
            }
            groups.push(vec![pt]);
        }
        return Ok(groups);
    }

    let d = p.critical_value_poly()?;
    let sd = d.squarefree_decomposition()?;
    let expected: usize = sd.parts.iter().filter_map(|(f, _)| f.degree()).sum();
    let mut exponents: Vec<usize> = sd
        .parts
        .iter()
        .flat_map(|(f, e)| std::iter::repeat(*e).take(f.degree().unwrap_or(0)))
        .collect();
    exponents.sort_unstable();

    let mut pts = points;
    let mut bits = prec.initial;
    loop {
        let comp = overlap_components(&pts);
        let count = comp.iter().max().map(|m| m + 1).unwrap_or(0);
        if count == expected {
            let mut groups: Vec<Vec<CriticalPoint>> = (0..count).map(|_| Vec::new()).collect();
            for (pt, c) in pts.into_iter().zip(&comp) {
                groups[*c].push(pt);
            }
            let mut q_sums: Vec<usize> =
                groups.iter().map(|g| g.iter().map(|m| m.q).sum()).collect();
            q_sums.sort_unstable();
            if q_sums != exponents {
                return Err(Error::Internal(format!(
                    "value-class q-sums {q_sums:?} disagree with D(y) exponents {exponents:?}"
                )));
            }
            return Ok(groups);
        }
        if bits >= prec.max {
            return Err(Error::PrecisionExhausted { max_bits: prec.max });
        }
        bits = (bits * 2).min(prec.max);
        let radius = radius_for(bits);
        for pt in &mut pts {
            match &pt.exact_value {
                Some(v) => pt.value_ball = v.embed(bits),
                None => {
                    pt.root = refine(&pt.root, Precision::new(bits, prec.max), &radius)?;
                    pt.value_ball = p.eval_ball(pt.root.ball(), bits);
                }
            }
        }
    }
}

/// Connected components of the value-overlap graph; exact-vs-exact pairs
/// merge only on true equality. Returns a component index per point,
/// components numbered by first appearance.
fn overlap_components(pts: &[CriticalPoint]) -> Vec<usize> {
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            let merge = match (&pts[i].exact_value, &pts[j].exact_value) {
                (Some(a), Some(b)) => a == b,
                _ => !pts[i].value_ball.disjoint_from(&pts[j].value_ball),
            };
            if merge {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let r = find(&mut parent, i);
        let next = label.len();
        out.push(*label.entry(r).or_insert(next));
    }
    out
}

/// Sorted multiset of exponents of the squarefree decomposition of D(y);
/// equals the multiset of column q-sums.
pub fn critical_value_exponents(p: &Poly) -> Result<Vec<usize>> {
    let d = p.critical_value_poly()?;
    let sd = d.squarefree_decomposition()?;
    let mut exps: Vec<usize> = sd
        .parts
        .iter()
        .flat_map(|(f, e)| std::iter::repeat(*e).take(f.degree().unwrap_or(0)))
        .collect();
    exps.sort_unstable();
    Ok(exps)
}

/// Derive the filtered multiplicity sets for one column given its members'
/// multiplicities in canonical member order.
pub fn compute_h_sets(qs: &[usize]) -> ColumnDerived {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for q in qs {
        *count.entry(*q).or_insert(0) += 1;
    }
    let a: Vec<usize> = count.iter().filter(|(_, c)| **c == 1).map(|(q, _)| *q).collect();
    let repeated: Vec<usize> = count.iter().filter(|(_, c)| **c > 1).map(|(q, _)| *q).collect();
    let mut a_h1: Vec<usize> = a
        .iter()
        .copied()
        .filter(|q| repeated.iter().all(|r| q > r))
        .collect();
    a_h1.sort_unstable_by(|x, y| y.cmp(x));
    let a_h2: Vec<usize> = match a_h1.first() {
        None => Vec::new(),
        Some(&q1) => a_h1.iter().copied().filter(|q| q1 + 1 < 2 * (q + 1)).collect(),
    };
    let b: Vec<usize> = (0..qs.len()).filter(|i| a.contains(&qs[*i])).collect();
    let b_h2: Vec<usize> = (0..qs.len()).filter(|i| a_h2.contains(&qs[*i])).collect();
    ColumnDerived { n_i: a_h1.len(), a, b, a_h1, a_h2, b_h2 }
}

impl StructureReport {
    /// Members of column `col` that belong to B_i(H2).
    pub fn b_h2_members(&self, col: usize) -> Vec<&CriticalPoint> {
        self.columns[col]
            .derived
            .b_h2
            .iter()
            .map(|&i| &self.columns[col].members[i])
            .collect()
    }

    pub fn to_json(&self) -> StructureJson {
        StructureJson {
            schema: STRUCTURE_SCHEMA.into(),
            degree: self.n,
            derivative_index: self.k,
            s: self.s,
            columns: self
                .columns
                .iter()
                .map(|c| ColumnJson {
                    value: ScalarJson {
                        exact: c.exact_class_value.as_ref().map(|v| v.render()),
                        ball: BallJson::of(&c.class_value),
                    },
                    members: c
                        .members
                        .iter()
                        .map(|m| MemberJson {
                            root: ScalarJson {
                                exact: m.root.exact_value().map(|v| v.render()),
                                ball: BallJson::of(m.root.ball()),
                            },
                            q: m.q,
                        })
                        .collect(),
                })
                .collect(),
            t: self.t,
            t_prime: self.t_prime,
            is_cip: self.is_cip,
            p_squarefree: self.p_squarefree,
            certification: self.certification.label().into(),
        }
    }

    /// Text rendering: header, both tables on a shared grid, per-column
    /// values, and the derived invariants.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "degree {}  derivative index k = {}  field {}\n",
            self.n,
            self.k,
            self.field.describe()
        ));
        out.push_str(&format!(
            "squarefree: {}  certification: {}\n",
            self.p_squarefree,
            self.certification.label()
        ));
        if self.k == 0 {
            out.push_str("no critical points\n");
            return out;
        }

        let cells_point: Vec<Vec<String>> = self.grid(|m| match m.root.exact_value() {
            Some(v) => v.render(),
            None => approx(m.root.ball()),
        });
        let cells_q: Vec<Vec<String>> = self.grid(|m| m.q.to_string());
        out.push_str("\nTable 1 (critical points)\n");
        out.push_str(&layout(&cells_point));
        out.push_str("\nTable 2 (multiplicities)\n");
        out.push_str(&layout(&cells_q));

        out.push_str("\ncolumn values\n");
        for (i, c) in self.columns.iter().enumerate() {
            let v = match &c.exact_class_value {
                Some(v) => v.render(),
                None => approx(&c.class_value),
            };
            let members: Vec<String> = c
                .members
                .iter()
                .map(|m| match m.root.exact_value() {
                    Some(r) => r.render(),
                    None => approx(m.root.ball()),
                })
                .collect();
            out.push_str(&format!(
                "  C{}: P({}) = {}  q = {:?}  B(H2) size {}\n",
                i + 1,
                members.join(") = P("),
                v,
                c.members.iter().map(|m| m.q).collect::<Vec<_>>(),
                c.derived.b_h2.len()
            ));
        }
        out.push_str(&format!(
            "\nrow sizes {:?}\ns = {}  t = {}  t' = {}  {}\n",
            self.row_sizes,
            self.s,
            self.t,
            self.t_prime,
            if self.is_cip { "CIP" } else { "NCIP" }
        ));
        out
    }

    fn grid(&self, cell: impl Fn(&CriticalPoint) -> String) -> Vec<Vec<String>> {
        (0..self.s)
            .map(|row| {
                self.columns
                    .iter()
                    .map(|c| {
                        let j = self.s - 1 - row;
                        if j < c.members.len() {
                            cell(&c.members[j])
                        } else {
                            ".".to_string()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn approx(b: &ComplexBall) -> String {
    let (re, im) = b.to_f64_pair();
    format!("~({re:.6}{im:+.6}i)")
}

fn layout(cells: &[Vec<String>]) -> String {
    if cells.is_empty() {
        return String::new();
    }
    let cols = cells[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| cells.iter().map(|row| row[c].chars().count()).max().unwrap_or(1))
        .collect();
    let mut out = String::new();
    for row in cells {
        out.push_str("  |");
        for (c, cell) in row.iter().enumerate() {
            let pad = widths[c] - cell.chars().count();
            out.push(' ');
            out.push_str(cell);
            out.push_str(&" ".repeat(pad));
            out.push_str(" |");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn build(src: &str) -> StructureReport {
        build_structure(&parse_poly(src).unwrap()).unwrap()
    }

    #[test]
    fn example_4_1_structure() {
        let r = build(
            "(1/6)*z^6 - (186/53)*z^5 + (1565/53)*z^4 - (6630/53)*z^3 + (28967/106)*z^2 - (14460/53)*z + 1",
        );
        assert_eq!((r.n, r.k, r.s), (6, 5, 2));
        assert_eq!((r.t, r.t_prime, r.is_cip), (3, 3, false));
        assert!(r.p_squarefree);
        assert_eq!(r.row_sizes, vec![1, 4]);
        let sizes: Vec<usize> = r.columns.iter().map(|c| c.members.len()).collect();
        assert_eq!(sizes, vec![1, 1, 1, 2]);
        let values: Vec<String> = r
            .columns
            .iter()
            .map(|c| c.exact_class_value.as_ref().unwrap().render())
            .collect();
        assert_eq!(
            values,
            vec!["-15497/159", "-3979/53", "-5030097474637/66493083387", "-12041/159"]
        );
        let pair = &r.columns[3];
        let roots: Vec<String> = pair
            .members
            .iter()
            .map(|m| m.root.exact_value().unwrap().render())
            .collect();
        assert_eq!(roots, vec!["4", "5"]);
        assert!(pair.derived.a.is_empty());
        assert!(pair.derived.b_h2.is_empty());
    }

    #[test]
    fn example_4_4_structure_gaussian() {
        let r = build(
            "(1/6)*z^6 - (6/5 + (2/5)*i)*z^5 + (5/2 + 3*i)*z^4 - (22/3)*i*z^3 - (11/2 - 6*i)*z^2 + 6*z",
        );
        assert_eq!((r.n, r.k, r.s), (6, 4, 2));
        assert_eq!((r.t, r.t_prime, r.is_cip), (3, 4, false));
        let pair = r.columns.iter().find(|c| c.members.len() == 2).unwrap();
        assert_eq!(pair.exact_class_value.as_ref().unwrap().render(), "9/10 + 9/5*i");
        assert_eq!(pair.derived.a, vec![1, 2]);
        assert_eq!(pair.derived.a_h1, vec![2, 1]);
        assert_eq!(pair.derived.a_h2, vec![2, 1]);
        assert_eq!(pair.derived.b_h2.len(), 2);
    }

    #[test]
    fn cip_flag_matches_t_identity() {
        let r = build("z^4 + z");
        assert!(r.is_cip);
        assert_eq!((r.k, r.t, r.t_prime), (3, 3, 3));
        // one critical point is trivially injective
        let r2 = build("z^3");
        assert!(r2.is_cip);
        assert_eq!((r2.k, r2.t, r2.t_prime), (1, 1, 1));
        // genuine collision: P = z^4 - 2z^2 has P(1) = P(-1) = -1, and the
        // colliding pair shares q = 1 so only the column of 0 contributes
        let r3 = build("z^4 - 2*z^2");
        assert!(!r3.is_cip);
        assert_eq!((r3.k, r3.t, r3.t_prime), (3, 1, 1));
    }

    #[test]
    fn z_cubed_single_class() {
        let r = build("z^3");
        assert_eq!(r.k, 1);
        assert_eq!(r.columns.len(), 1);
        assert_eq!(r.columns[0].q_sum, 2);
        assert!(r.is_cip);
    }

    #[test]
    fn irrational_collision_certified_by_dy() {
        // P = (z^2-2)^2: critical points 0, ±sqrt(2); P(±sqrt2) = 0 collide
        let r = build("(z^2 - 2)^2");
        assert_eq!(r.k, 3);
        assert!(!r.p_squarefree);
        assert_eq!(r.columns.len(), 2);
        let sizes: Vec<usize> = r.columns.iter().map(|c| c.members.len()).collect();
        assert_eq!(sizes, vec![1, 2]);
        let qsums: Vec<usize> = r.columns.iter().map(|c| c.q_sum).collect();
        assert_eq!(qsums, vec![1, 2]);
        assert_eq!(critical_value_exponents(&parse_poly("(z^2 - 2)^2").unwrap()).unwrap(), vec![1, 2]);
    }

    #[test]
    fn h_sets_band_filter() {
        // column {7, 4}: both unrepeated, 7+1 < 2(4+1) so both survive
        let d = compute_h_sets(&[7, 4]);
        assert_eq!(d.a, vec![4, 7]);
        assert_eq!(d.a_h1, vec![7, 4]);
        assert_eq!(d.a_h2, vec![7, 4]);
        assert_eq!(d.b_h2, vec![0, 1]);
        // column {9, 4}: 9+1 = 2(4+1) fails the strict band
        let d2 = compute_h_sets(&[9, 4]);
        assert_eq!(d2.a_h2, vec![9]);
        // column {2, 1, 1}: 2 unrepeated and dominant, 1 repeated
        let d3 = compute_h_sets(&[2, 1, 1]);
        assert_eq!(d3.a, vec![2]);
        assert_eq!(d3.a_h1, vec![2]);
        assert_eq!(d3.a_h2, vec![2]);
        assert_eq!(d3.b_h2, vec![0]);
        // column {1, 1}: nothing unrepeated
        let d4 = compute_h_sets(&[1, 1]);
        assert!(d4.a.is_empty() && d4.b_h2.is_empty());
        // dominance: {3, 2, 2, 1}: unrepeated 3 and 1, only 3 dominates the repeated 2
        let d5 = compute_h_sets(&[3, 2, 2, 1]);
        assert_eq!(d5.a, vec![1, 3]);
        assert_eq!(d5.a_h1, vec![3]);
    }

    #[test]
    fn json_round_trip() {
        let r = build("z^4 - 2*z^2");
        let j = r.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: StructureJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(j.schema, "structure.v1");
        assert_eq!(j.derivative_index, 3);
        assert!(!j.is_cip);
    }

    #[test]
    fn text_layout_renders_ragged_tables() {
        let r = build(
            "(1/6)*z^6 - (186/53)*z^5 + (1565/53)*z^4 - (6630/53)*z^3 + (28967/106)*z^2 - (14460/53)*z + 1",
        );
        let text = r.render_text();
        assert!(text.contains("t = 3"));
        assert!(text.contains("NCIP"));
        // top row has a single filled cell (the member 5) and three dots
        let table_lines: Vec<&str> = text.lines().filter(|l| l.starts_with("  |")).collect();
        assert_eq!(table_lines.len(), 4);
        assert_eq!(table_lines[0].matches('.').count(), 3);
        assert!(table_lines[0].contains('5'));
        assert!(table_lines[1].contains("241/53"));
    }
}
