//! Oracles for the integration tests, written from the definitions and kept
//! apart from the library's own algorithms.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use pg2q::plane::Matrix3;
use pg2q::search::{Objective, Predicate, SearchResult, SearchSpec};
use pg2q::{Field, FieldElement, PlaneCtx, Rational};

/// Every element of PGL(3,q) as a permutation of the points, found by scanning
/// all matrices whose first nonzero entry is 1.
pub fn pgl(ctx: &PlaneCtx) -> Vec<Vec<u32>> {
    let q = ctx.q() as u64;
    let f = ctx.field();
    let mut out = Vec::new();
    for code in 0..q.pow(9) {
        let mut rows = [[0u32; 3]; 3];
        let mut c = code;
        for i in 0..9 {
            rows[i / 3][i % 3] = (c % q) as u32;
            c /= q;
        }
        if rows.iter().flatten().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let m = Matrix3::from_codes(rows);
        if m.det(f).is_zero() {
            continue;
        }
        out.push((0..ctx.num_points()).map(|p| ctx.image(&m, p)).collect());
    }
    out
}

pub fn pgl_order(q: u64) -> u64 {
    q.pow(3) * (q.pow(3) - 1) * (q * q - 1)
}

/// A point set with colors, as sorted `(color, point)` pairs.
pub type Colored = Vec<(u32, u32)>;

pub fn colored(points: &[u32], marked: Option<u32>) -> Colored {
    let mut v: Colored = points.iter().map(|&p| (0, p)).chain(marked.map(|o| (1, o))).collect();
    v.sort_unstable();
    v
}

fn apply(perm: &[u32], items: &Colored) -> Colored {
    let mut v: Colored = items.iter().map(|&(c, p)| (c, perm[p as usize])).collect();
    v.sort_unstable();
    v
}

pub fn orbit_min(group: &[Vec<u32>], items: &Colored) -> Colored {
    group.iter().map(|g| apply(g, items)).min().expect("the group is not empty")
}

pub fn stabilizer_order(group: &[Vec<u32>], points: &[u32]) -> u64 {
    let mut member = vec![false; group[0].len()];
    for &p in points {
        member[p as usize] = true;
    }
    group.iter().filter(|g| points.iter().all(|&p| member[g[p as usize] as usize])).count() as u64
}

/// Orbit bookkeeping by full orbit enumeration.
pub struct Orbits<'a> {
    group: &'a [Vec<u32>],
    seen: HashMap<Colored, usize>,
    pub reps: Vec<Colored>,
}

impl<'a> Orbits<'a> {
    pub fn new(group: &'a [Vec<u32>]) -> Self {
        Orbits { group, seen: HashMap::new(), reps: Vec::new() }
    }

    /// The orbit minimum of a colored set.
    pub fn classify(&mut self, items: &Colored) -> Colored {
        if let Some(&i) = self.seen.get(items) {
            return self.reps[i].clone();
        }
        let images: Vec<Colored> = self.group.iter().map(|g| apply(g, items)).collect();
        let min = images.iter().min().unwrap().clone();
        let i = self.reps.len();
        self.reps.push(min.clone());
        for im in images {
            self.seen.insert(im, i);
        }
        min
    }
}

/// Number of points of the set on every line, by scanning the lines.
pub fn line_counts(ctx: &PlaneCtx, points: &[u32]) -> Vec<u32> {
    let mut member = vec![false; ctx.num_points() as usize];
    for &p in points {
        member[p as usize] = true;
    }
    (0..ctx.num_lines()).map(|l| ctx.points_on(l).iter().filter(|&&p| member[p as usize]).count() as u32).collect()
}

pub fn odd_secants(counts: &[u32]) -> u32 {
    counts.iter().filter(|&&c| c % 2 == 1).count() as u32
}

pub fn tangents_at(ctx: &PlaneCtx, counts: &[u32], p: u32) -> Vec<u32> {
    ctx.lines_through(p).iter().copied().filter(|&l| counts[l as usize] == 1).collect()
}

/// `Σ t_i(P)/i` over odd `i`.
pub fn weight(ctx: &PlaneCtx, counts: &[u32], p: u32) -> Rational {
    ctx.lines_through(p)
        .iter()
        .map(|&l| counts[l as usize])
        .filter(|c| c % 2 == 1)
        .map(|c| Rational::new(1, c as i64))
        .sum()
}

pub fn is_semioval(ctx: &PlaneCtx, points: &[u32]) -> bool {
    let counts = line_counts(ctx, points);
    !points.is_empty() && points.iter().all(|&p| tangents_at(ctx, &counts, p).len() == 1)
}

/// No three of the lines pass through one point.
pub fn is_dual_arc(ctx: &PlaneCtx, lines: &[u32]) -> bool {
    (0..ctx.num_points()).all(|p| lines.iter().filter(|&&l| ctx.incident(p, l)).count() <= 2)
}

/// Acceptance of a finished set, from the definitions.
pub fn accepts(ctx: &PlaneCtx, pred: &Predicate, points: &[u32], marked: Option<u32>) -> bool {
    let q = ctx.q();
    let counts = line_counts(ctx, points);
    match *pred {
        Predicate::Any => true,
        Predicate::Semioval => is_semioval(ctx, points),
        Predicate::BlokhuisPattern { a } => is_semioval(ctx, points) && counts.iter().all(|&c| c <= 2 || c == a),
        Predicate::Type02t { t } => {
            points.len() as u32 == q + t && counts.iter().all(|&c| [0, 2, t].contains(&c)) && counts.contains(&t)
        }
        Predicate::PeterDual { k, m } => {
            let o = marked.expect("a marked point");
            let through = ctx.lines_through(o).iter().filter(|&&l| counts[l as usize] == k).count() as u32;
            let avoiding = (0..ctx.num_lines()).filter(|&l| !ctx.incident(o, l) && counts[l as usize] % 2 == 1).count() as u32;
            !points.contains(&o) && through >= m && avoiding == q - k
        }
    }
}

/// All `k`-subsets of `items`, in lexicographic order.
pub fn subsets(items: &[u32], k: usize, mut visit: impl FnMut(&[u32])) {
    fn rec(items: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, visit);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::new(), &mut visit);
}

/// Orbit representatives and optimum of an unreduced scan over every set.
#[derive(Debug, PartialEq, Eq)]
pub struct Brute {
    pub optimum: Option<u32>,
    pub orbits: BTreeSet<Colored>,
}

pub fn brute_force(ctx: &PlaneCtx, group: &[Vec<u32>], spec: &SearchSpec) -> Brute {
    let marked = matches!(spec.predicate, Predicate::PeterDual { .. });
    let all: Vec<u32> = (0..ctx.num_points()).collect();
    let mut found: Vec<(Colored, u32)> = Vec::new();
    let markers: Vec<Option<u32>> = if marked { all.iter().map(|&o| Some(o)).collect() } else { vec![None] };
    for o in markers {
        let free: Vec<u32> = all.iter().copied().filter(|&p| Some(p) != o).collect();
        subsets(&free, spec.target_size as usize, |s| {
            if accepts(ctx, &spec.predicate, s, o) {
                found.push((colored(s, o), odd_secants(&line_counts(ctx, s))));
            }
        });
    }
    let optimum = found.iter().map(|f| f.1).min();
    if spec.objective == Objective::MinOddSecants {
        found.retain(|f| Some(f.1) == optimum);
    }
    let mut orbits = Orbits::new(group);
    let reps = found.iter().map(|(c, _)| orbits.classify(c)).collect();
    Brute { optimum: if spec.objective == Objective::MinOddSecants { optimum } else { None }, orbits: reps }
}

/// The same summary for a library result.
pub fn summarize(group: &[Vec<u32>], spec: &SearchSpec, r: &SearchResult) -> Brute {
    let mut orbits = Orbits::new(group);
    Brute {
        optimum: if spec.objective == Objective::MinOddSecants { r.optimum } else { None },
        orbits: r.witnesses.iter().map(|w| orbits.classify(&colored(&w.points, w.marked))).collect(),
    }
}

/// Dense polynomial helpers over GF(q), lowest coefficient first.
pub fn poly_mul_linear(f: &Field, p: &[FieldElement], a: FieldElement, b: FieldElement) -> Vec<FieldElement> {
    // p · (aY − b)
    let mut out = vec![FieldElement::ZERO; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] = f.add(out[i + 1], f.mul(c, a));
        out[i] = f.sub(out[i], f.mul(c, b));
    }
    trim(out)
}

pub fn trim(mut p: Vec<FieldElement>) -> Vec<FieldElement> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn eval(f: &Field, p: &[FieldElement], y: FieldElement) -> FieldElement {
    p.iter().rev().fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, y), c))
}

/// Multiplicity of `m` as a root, by repeated division by `Y − m`.
pub fn root_multiplicity(f: &Field, p: &[FieldElement], m: FieldElement) -> usize {
    let mut p = trim(p.to_vec());
    let mut n = 0;
    while !p.is_empty() && eval(f, &p, m).is_zero() {
        let mut quotient = vec![FieldElement::ZERO; p.len() - 1];
        let mut carry = FieldElement::ZERO;
        for i in (1..p.len()).rev() {
            carry = f.add(f.mul(carry, m), p[i]);
            quotient[i - 1] = carry;
        }
        p = trim(quotient);
        n += 1;
    }
    n
}

/// `(Y − m)^e`.
pub fn linear_power(f: &Field, m: FieldElement, e: usize) -> Vec<FieldElement> {
    (0..e).fold(vec![FieldElement::ONE], |acc, _| poly_mul_linear(f, &acc, FieldElement::ONE, m))
}

pub fn poly_add(f: &Field, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let n = a.len().max(b.len());
    let get = |p: &[FieldElement], i: usize| p.get(i).copied().unwrap_or(FieldElement::ZERO);
    trim((0..n).map(|i| f.add(get(a, i), get(b, i))).collect())
}

/// Generic search specs covering every predicate at order `q`.
pub fn oracle_specs(q: u32) -> Vec<SearchSpec> {
    let n = q * q + q + 1;
    let mut specs = Vec::new();
    for size in 1..=n {
        specs.push(SearchSpec::min_odd_secants(q, size));
        specs.push(SearchSpec::new(q, size, Objective::EnumeratePredicate, Predicate::Any));
        specs.push(SearchSpec::semiovals(q, size));
    }
    for t in (1..=q + 1).filter(|&t| t != 2) {
        specs.push(SearchSpec::new(q, q + t, Objective::EnumeratePredicate, Predicate::Type02t { t }));
    }
    for a in 2..=q + 1 {
        specs.push(SearchSpec::new(q, q - 1 + a, Objective::EnumeratePredicate, Predicate::BlokhuisPattern { a }));
    }
    if q % 2 == 1 {
        for k in (1..=q).step_by(2) {
            for m in 1..=q + 1 {
                specs.push(SearchSpec::new(q, q + k, Objective::EnumeratePredicate, Predicate::PeterDual { k, m }));
            }
        }
    }
    specs
}

/// Runs every search operation at order `q` under every reduction, with and
/// without pruning, against [`brute_force`]. Returns the number of agreeing runs.
pub fn check_search_ops(q: u32) -> Result<usize, String> {
    use pg2q::search::{self, SymmetryReduction};
    let ctx = PlaneCtx::with_order(q).map_err(|e| e.to_string())?;
    let group = pgl(&ctx);
    let mut runs = 0;
    let mut compare = |what: String, spec: &SearchSpec, got: &SearchResult, want: &Brute| -> Result<(), String> {
        if !got.exhaustive {
            return Err(format!("{what}: not exhaustive"));
        }
        if got.witnesses.len() != want.orbits.len() {
            return Err(format!("{what}: {} witnesses for {} orbits", got.witnesses.len(), want.orbits.len()));
        }
        let got = summarize(&group, spec, got);
        if &got != want {
            return Err(format!("{what}: library {got:?}, brute force {want:?}"));
        }
        runs += 1;
        Ok(())
    };
    let reductions = [SymmetryReduction::None, SymmetryReduction::LexminStabilizer, SymmetryReduction::FullCanonical];
    for spec in oracle_specs(q) {
        let want = brute_force(&ctx, &group, &spec);
        for reduction in reductions {
            for pruning in [true, false] {
                let s = spec.clone().with_reduction(reduction).with_pruning(pruning);
                let got = search::search_in(&ctx, &s).map_err(|e| format!("{s:?}: {e}"))?;
                compare(format!("{s:?}"), &s, &got, &want)?;
            }
        }
        let named = match spec.predicate {
            Predicate::Any if spec.objective == Objective::MinOddSecants => Some(search::min_odd_secants(q, spec.target_size)),
            Predicate::Semioval if spec.target_size > q => Some(search::enumerate_semiovals(q, spec.target_size)),
            Predicate::BlokhuisPattern { a } if a > 2 && q % 2 == 1 => Some(search::verify_blokhuis_classification(q, a)),
            _ => None,
        };
        if let Some(r) = named {
            let r = r.map_err(|e| format!("{spec:?}: {e}"))?;
            compare(format!("named operation for {spec:?}"), &spec, &r, &want)?;
        }
    }
    if q % 2 == 1 {
        // Only cases with 4 ≤ m ≤ q−1 are part of the refutation.
        let r = search::verify_peter_nonexistence(q).map_err(|e| e.to_string())?;
        let mut want = BTreeSet::new();
        for k in (1..=q).step_by(2) {
            for m in 4..q {
                let spec = SearchSpec::new(q, q + k, Objective::EnumeratePredicate, Predicate::PeterDual { k, m });
                want.extend(brute_force(&ctx, &group, &spec).orbits);
            }
        }
        let spec = SearchSpec::new(q, q + 1, Objective::EnumeratePredicate, Predicate::PeterDual { k: 1, m: 1 });
        compare("verify_peter_nonexistence".into(), &spec, &r, &Brute { optimum: None, orbits: want })?;
    }
    Ok(runs)
}
