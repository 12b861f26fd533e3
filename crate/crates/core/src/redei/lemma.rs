use super::{directions_of, points_toward, AffineQSet, DensePoly, RedeiError, RedeiReport};
use crate::gf::FieldElement;
use crate::plane::{PlaneCtx, Slope};
use crate::report::{Clause, Verdict, Witness};

type Affine = (FieldElement, FieldElement);

/// `f(Y) = ∏ ((a_i − a_0)Y − (b_i − b_0))` over the points of `u` other than `r = (a_0, b_0)`.
pub fn f_poly(ctx: &PlaneCtx, u: &AffineQSet, r: Affine) -> Result<DensePoly, RedeiError> {
    if !u.contains(r) {
        return Err(RedeiError::NotInSet { x: r.0.code(), y: r.1.code() });
    }
    let f = ctx.field();
    Ok(u.points()
        .iter()
        .filter(|&&pt| pt != r)
        .fold(DensePoly::constant(FieldElement::ONE), |acc, &(a, b)| acc.mul_linear(f, f.sub(a, r.0), f.sub(b, r.1))))
}

/// `Σ (Y − m_i)^{q−1} − k` over the slopes `m_1..m_k`.
pub fn g_poly(ctx: &PlaneCtx, missing: &[FieldElement]) -> DensePoly {
    let f = ctx.field();
    let q1 = ctx.q() as usize - 1;
    let k = f.from_int(missing.len() as i64);
    missing
        .iter()
        .fold(DensePoly::constant(f.neg(k)), |acc, &m| acc.add(f, &DensePoly::linear_power(f, m, q1)))
}

pub fn verify_lemma_poly(ctx: &PlaneCtx, u: &AffineQSet, r: Affine) -> Result<RedeiReport, RedeiError> {
    let poly = f_poly(ctx, u, r)?;
    let f = ctx.field();
    let dirs = directions_of(ctx, u);
    let point = |pt: Affine| ctx.affine_point(pt.0, pt.1);

    let mut bad = None;
    for m in f.elements() {
        let k_m = points_toward(ctx, u, r, Slope::Finite(m));
        if poly.root_multiplicity(f, m) != Some(k_m as usize - 1) {
            bad = Some((m, k_m));
            break;
        }
    }
    let multiplicity = Verdict::check(bad.is_none(), || {
        let (m, k_m) = bad.unwrap();
        Witness::new(format!("slope {m}: line meets the set in {k_m} points, multiplicity {:?}", poly.root_multiplicity(f, m)))
            .point(ctx, point(r))
            .point(ctx, ctx.direction_point(Slope::Finite(m)))
    });

    let undetermined: Vec<FieldElement> = f.elements().filter(|&m| !dirs.contains(ctx, Slope::Finite(m))).collect();
    let minus_one = f.neg(FieldElement::ONE);
    let value = if undetermined.is_empty() {
        Verdict::vacuous("every finite direction is determined")
    } else {
        let wrong = undetermined.iter().copied().find(|&m| poly.eval(f, m) != minus_one);
        Verdict::check(wrong.is_none(), || {
            let m = wrong.unwrap();
            Witness::new(format!("f({m}) = {}", poly.eval(f, m))).point(ctx, ctx.direction_point(Slope::Finite(m)))
        })
    };

    let vertical_free = !dirs.contains(ctx, Slope::Infinite);
    let q1 = ctx.q() as usize - 1;
    let leading = if vertical_free {
        Verdict::check(poly.degree() == Some(q1) && poly.coeff(q1) == minus_one, || {
            Witness::new(format!("coefficient of Y^{q1} is {}", poly.coeff(q1)))
        })
    } else {
        Verdict::vacuous("the vertical direction is determined")
    };

    Ok(RedeiReport {
        hypotheses: vec![
            ("some_finite_direction_undetermined".into(), !undetermined.is_empty()),
            ("vertical_direction_undetermined".into(), vertical_free),
        ],
        clauses: vec![
            Clause::new("root_multiplicity", multiplicity),
            Clause::new("undetermined_value", value),
            Clause::new("leading_coefficient", leading),
        ],
    })
}

/// Checks `f = g` coefficient-wise for a base point on no bisecant of `U ∪ D_U`.
///
/// When `(∞)` is determined, coordinates are first changed by `(x, y) ↦ (y − cx, x)`
/// for an undetermined slope `c`, which moves `(c)` to `(∞)`.
pub fn zero_bisecant_identity(ctx: &PlaneCtx, u: &AffineQSet, r: Affine) -> Result<Verdict, RedeiError> {
    if !u.contains(r) {
        return Err(RedeiError::NotInSet { x: r.0.code(), y: r.1.code() });
    }
    let f = ctx.field();
    let dirs = directions_of(ctx, u);
    if dirs.n() == ctx.q() + 1 {
        return Ok(Verdict::vacuous("every direction is determined"));
    }
    let on_bisecant = f
        .elements()
        .map(Slope::Finite)
        .chain([Slope::Infinite])
        .any(|s| points_toward(ctx, u, r, s) + dirs.contains(ctx, s) as u32 == 2);
    if on_bisecant {
        return Ok(Verdict::vacuous("the base point lies on a bisecant"));
    }

    let (u, r) = if dirs.contains(ctx, Slope::Infinite) {
        let c = f.elements().find(|&m| !dirs.contains(ctx, Slope::Finite(m))).expect("an undetermined slope");
        let map = |(x, y): Affine| (f.sub(y, f.mul(c, x)), x);
        (AffineQSet::new(ctx, u.points().iter().map(|&p| map(p)).collect())?, map(r))
    } else {
        (u.clone(), r)
    };
    let dirs = directions_of(ctx, &u);
    let missing: Vec<FieldElement> = f.elements().filter(|&m| !dirs.contains(ctx, Slope::Finite(m))).collect();
    let lhs = f_poly(ctx, &u, r)?;
    let rhs = g_poly(ctx, &missing);
    Ok(Verdict::check(lhs == rhs, || {
        Witness::new(format!(
            "f = {:?}, g = {:?}",
            lhs.coeffs().iter().map(|c| c.code()).collect::<Vec<_>>(),
            rhs.coeffs().iter().map(|c| c.code()).collect::<Vec<_>>()
        ))
    }))
}
