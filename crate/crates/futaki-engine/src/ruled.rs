//! Weight tables and invariants for a family of ruled surfaces.
//!
//! The surface is the projectivization of O + M over a genus-2 curve,
//! where M has degree 1, polarized by L = C + m S0 for a rational slope
//! m > 0 (C a fibre, S0 the infinity-avoiding section, S0^2 = 1).  The
//! section space H^0(L^k) splits under the fibrewise C*-action into
//! blocks indexed by the vanishing order l = 0..mk along the section
//! S_inf = S0 - C; block l has dimension k + l - 1 and fibre weight l.
//!
//! A degeneration attaching weight -1 to the deformation parameter acts
//! on block l with weight l - ck for l < ck and 0 above the cut; the
//! mirrored degeneration does the same in the S0-vanishing grading.
//! Summing weights over blocks gives exact trace tables, their growth
//! polynomials, and hence Futaki invariants; the same invariants have
//! closed forms in (m, c) whose sign changes are certified here by
//! Sturm root isolation.
//!
//! The pair variants average the tables with the tables of the
//! complement of the relevant section, which subtracts half of the
//! boundary restriction block from every trace.

use crate::asymptotics::{futaki_and_products, CrossLeading, FutakiProducts, WeightAsymptotics};
use crate::{FutakiError, Result};
use exact_geometry::bivariate::Poly2;
use exact_geometry::poly::Poly;
use exact_geometry::rational::{format_rat, rat, rat_int};
use exact_geometry::roots::{
    cauchy_root_bound, count_roots_open, isolate_real_roots, refine_root, RootInterval,
};
use exact_geometry::{Int, Rat};
use num::ToPrimitive;

/// Which trace tables to build: the whole surface, or the average of the
/// surface with the complement of one of the two distinguished sections.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuledMode {
    WholeSurface,
    /// Pair with the negative section S_inf (the one the deformation cuts).
    PairSInfinity,
    /// Pair with the positive section S0, using the mirrored deformation.
    PairSZero,
}

/// Exact trace sums at one level k.  Pair modes subtract half-blocks, so
/// the entries are half-integers in general.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuledTableRow {
    pub k: u64,
    pub dimension: Rat,
    pub tr_a: Rat,
    pub tr_b: Rat,
    pub tr_ab: Rat,
    pub tr_aa: Rat,
    pub tr_bb: Rat,
}

/// Per-k exact weight sums for a fixed slope pair (m, c).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuledWeightTables {
    pub m: Rat,
    pub c: Rat,
    pub mode: RuledMode,
    pub rows: Vec<RuledTableRow>,
}

/// The six growth polynomials in k underlying a weight table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuledAsymptotics {
    /// Complex dimension of the surface (always 2 here).
    pub n: usize,
    pub dimension: Poly,
    pub tr_a: Poly,
    pub tr_b: Poly,
    pub tr_ab: Poly,
    pub tr_aa: Poly,
    pub tr_bb: Poly,
}

impl RuledAsymptotics {
    /// Packages the leading coefficients as a (deformation, fibre) action
    /// pair ready for [`futaki_and_products`].  Each action carries cross
    /// terms referring to the other, so the pair may be passed in either
    /// order.
    pub fn action_pair(&self) -> Result<(WeightAsymptotics, WeightAsymptotics)> {
        let mut alpha = WeightAsymptotics::from_polynomials(self.n, &self.dimension, &self.tr_a)?;
        let mut beta = WeightAsymptotics::from_polynomials(self.n, &self.dimension, &self.tr_b)?;
        let o = self.n + 2;
        alpha.cross = Some(CrossLeading {
            tr_ab: self.tr_ab.coeff(o),
            tr_aa: self.tr_aa.coeff(o),
            tr_bb: self.tr_bb.coeff(o),
        });
        beta.cross = Some(CrossLeading {
            tr_ab: self.tr_ab.coeff(o),
            tr_aa: self.tr_bb.coeff(o),
            tr_bb: self.tr_aa.coeff(o),
        });
        Ok((alpha, beta))
    }
}

fn validate_slopes(m: &Rat, c: &Rat) -> Result<()> {
    if *m <= rat_int(0) {
        return Err(FutakiError::ParameterRange(format!(
            "slope m must be positive, got {}",
            format_rat(m)
        )));
    }
    if *c <= rat_int(0) || *c >= *m {
        return Err(FutakiError::ParameterRange(format!(
            "deformation slope c must lie strictly between 0 and m = {}, got {}",
            format_rat(m),
            format_rat(c)
        )));
    }
    Ok(())
}

fn integral_multiple(x: &Rat, k: u64) -> Option<i128> {
    let v = x * rat_int(k as i64);
    if !v.is_integer() {
        return None;
    }
    v.to_integer().to_i128()
}

fn half_of(x: i128) -> Rat {
    Rat::new(Int::from(x), Int::from(2))
}

/// Sums the block weights directly for each requested k.
///
/// Every k must make both mk and ck integral, so that the decomposition
/// into weight blocks exists at that level.
pub fn ruled_bruteforce_tables(
    m: &Rat,
    c: &Rat,
    mode: RuledMode,
    k_list: &[u64],
) -> Result<RuledWeightTables> {
    validate_slopes(m, c)?;
    let mut rows = Vec::with_capacity(k_list.len());
    for &k in k_list {
        if k == 0 {
            return Err(FutakiError::ParameterRange("k must be positive".into()));
        }
        let (mk, ck) = match (integral_multiple(m, k), integral_multiple(c, k)) {
            (Some(mk), Some(ck)) => (mk, ck),
            _ => return Err(FutakiError::NonIntegralBlockCount { k }),
        };
        let ki = k as i128;
        let (mut d, mut ta, mut tb, mut tab, mut taa, mut tbb) = (0i128, 0, 0, 0, 0, 0);
        for l in 0..=mk {
            let dim = ki + l - 1;
            let cut = match mode {
                RuledMode::WholeSurface | RuledMode::PairSInfinity => l,
                RuledMode::PairSZero => mk - l,
            };
            let aw = if cut < ck { cut - ck } else { 0 };
            d += dim;
            ta += aw * dim;
            tb += l * dim;
            tab += aw * l * dim;
            taa += aw * aw * dim;
            tbb += l * l * dim;
        }
        let mut row = RuledTableRow {
            k,
            dimension: Rat::from_integer(Int::from(d)),
            tr_a: Rat::from_integer(Int::from(ta)),
            tr_b: Rat::from_integer(Int::from(tb)),
            tr_ab: Rat::from_integer(Int::from(tab)),
            tr_aa: Rat::from_integer(Int::from(taa)),
            tr_bb: Rat::from_integer(Int::from(tbb)),
        };
        match mode {
            RuledMode::WholeSurface => {}
            RuledMode::PairSInfinity => {
                // Restriction block to S_inf: dimension k-1, weights (-ck, 0).
                let dim_b = ki - 1;
                row.dimension -= half_of(dim_b);
                row.tr_a -= half_of(-ck * dim_b);
                row.tr_aa -= half_of(ck * ck * dim_b);
            }
            RuledMode::PairSZero => {
                // Restriction block to S0: dimension (1+m)k-1, weights (-ck, mk).
                let dim_b = ki + mk - 1;
                row.dimension -= half_of(dim_b);
                row.tr_a -= half_of(-ck * dim_b);
                row.tr_b -= half_of(mk * dim_b);
                row.tr_ab -= half_of(-ck * mk * dim_b);
                row.tr_aa -= half_of(ck * ck * dim_b);
                row.tr_bb -= half_of(mk * mk * dim_b);
            }
        }
        rows.push(row);
    }
    Ok(RuledWeightTables { m: m.clone(), c: c.clone(), mode, rows })
}

/// Recovers the growth polynomials from a table by exact interpolation.
///
/// The quartic series need five nodes, so at least five rows are
/// required; any surplus rows must lie on the interpolated polynomials
/// exactly, otherwise the table is not polynomial and an error names the
/// offending series and level.
pub fn tables_to_asymptotics(tables: &RuledWeightTables) -> Result<RuledAsymptotics> {
    const SERIES: [(&str, usize); 6] = [
        ("dimension", 2),
        ("tr_a", 3),
        ("tr_b", 3),
        ("tr_ab", 4),
        ("tr_aa", 4),
        ("tr_bb", 4),
    ];
    let rows = &tables.rows;
    if rows.len() < 5 {
        return Err(FutakiError::InsufficientSamples { got: rows.len(), want: 5 });
    }
    let value = |row: &RuledTableRow, series: &str| -> Rat {
        match series {
            "dimension" => row.dimension.clone(),
            "tr_a" => row.tr_a.clone(),
            "tr_b" => row.tr_b.clone(),
            "tr_ab" => row.tr_ab.clone(),
            "tr_aa" => row.tr_aa.clone(),
            _ => row.tr_bb.clone(),
        }
    };
    let mut fitted = Vec::with_capacity(6);
    for (name, degree) in SERIES {
        let nodes: Vec<(Rat, Rat)> = rows[..degree + 1]
            .iter()
            .map(|r| (rat_int(r.k as i64), value(r, name)))
            .collect();
        let poly = Poly::lagrange_interpolate(&nodes)?;
        for r in &rows[degree + 1..] {
            if poly.eval(&rat_int(r.k as i64)) != value(r, name) {
                return Err(FutakiError::FitResidual { series: name, k: r.k });
            }
        }
        fitted.push(poly);
    }
    let mut it = fitted.into_iter();
    Ok(RuledAsymptotics {
        n: 2,
        dimension: it.next().unwrap(),
        tr_a: it.next().unwrap(),
        tr_b: it.next().unwrap(),
        tr_ab: it.next().unwrap(),
        tr_aa: it.next().unwrap(),
        tr_bb: it.next().unwrap(),
    })
}

/// S_j(N) = sum_{l=0}^{N} l^j as a polynomial in N of degree j+1,
/// recovered by interpolation at N = 0..=j+1 (with 0^0 = 1).
fn power_sum_poly(j: usize) -> Poly {
    let mut points = Vec::with_capacity(j + 2);
    let mut acc = rat_int(0);
    for n in 0..=(j as i64 + 1) {
        acc += if j == 0 { rat_int(1) } else { rat_int(n.pow(j as u32)) };
        points.push((rat_int(n), acc.clone()));
    }
    Poly::lagrange_interpolate(&points).expect("interpolation nodes are distinct")
}

/// Sums a bivariate integrand (x = k, y = block index) over
/// y = 0..=s*x + t, returning the resulting polynomial in k.
fn sum_over_levels(integrand: &Poly2, s: &Rat, t: &Rat) -> Poly {
    let mut total = Poly::zero();
    for (j, cj) in integrand.y_coeffs().iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let sj = power_sum_poly(j).compose_affine(s, t);
        total = &total + &(cj * &sj);
    }
    total
}

/// Builds the growth polynomials symbolically by closed-form summation
/// over the weight blocks.
///
/// The results agree with [`ruled_bruteforce_tables`] at every k for
/// which mk and ck are integral, and are the unique polynomials doing so.
pub fn ruled_symbolic_asymptotics(m: &Rat, c: &Rat, mode: RuledMode) -> Result<RuledAsymptotics> {
    validate_slopes(m, c)?;
    let x = Poly2::x();
    let y = Poly2::y();
    let one = Poly2::constant(rat_int(1));

    // Fibre-weight series summed over the full range l = 0..mk in the
    // S_inf-vanishing grading; the mirrored grading sums to the same
    // totals, so these are mode-independent before pair adjustment.
    let dim_l = &(&x + &y) - &one;
    let (full_s, full_t) = (m.clone(), rat_int(0));
    let mut dimension = sum_over_levels(&dim_l, &full_s, &full_t);
    let mut tr_b = sum_over_levels(&(&y * &dim_l), &full_s, &full_t);
    let mut tr_bb = sum_over_levels(&(&(&y * &y) * &dim_l), &full_s, &full_t);

    // Deformation-weight series summed over the cut range y = 0..ck-1 in
    // whichever grading the deformation acts on; y is the grading index
    // and the weight there is y - ck.
    let aw = &y - &x.scale(c);
    let (cut_dim, cut_bw) = match mode {
        RuledMode::WholeSurface | RuledMode::PairSInfinity => (dim_l.clone(), y.clone()),
        RuledMode::PairSZero => {
            let one_plus_m = rat_int(1) + m;
            (&(&x.scale(&one_plus_m) - &y) - &one, &x.scale(m) - &y)
        }
    };
    let (cut_s, cut_t) = (c.clone(), rat_int(-1));
    let mut tr_a = sum_over_levels(&(&aw * &cut_dim), &cut_s, &cut_t);
    let mut tr_ab = sum_over_levels(&(&(&aw * &cut_bw) * &cut_dim), &cut_s, &cut_t);
    let mut tr_aa = sum_over_levels(&(&(&aw * &aw) * &cut_dim), &cut_s, &cut_t);

    let kx = Poly::x();
    let half = rat(1, 2);
    match mode {
        RuledMode::WholeSurface => {}
        RuledMode::PairSInfinity => {
            let dim_b = &kx - &Poly::constant(rat_int(1));
            let aw_b = kx.scale(&-c.clone());
            dimension = &dimension - &dim_b.scale(&half);
            tr_a = &tr_a - &(&aw_b * &dim_b).scale(&half);
            tr_aa = &tr_aa - &(&(&aw_b * &aw_b) * &dim_b).scale(&half);
        }
        RuledMode::PairSZero => {
            let dim_b = &kx.scale(&(rat_int(1) + m)) - &Poly::constant(rat_int(1));
            let aw_b = kx.scale(&-c.clone());
            let bw_b = kx.scale(m);
            dimension = &dimension - &dim_b.scale(&half);
            tr_a = &tr_a - &(&aw_b * &dim_b).scale(&half);
            tr_b = &tr_b - &(&bw_b * &dim_b).scale(&half);
            tr_ab = &tr_ab - &(&(&aw_b * &bw_b) * &dim_b).scale(&half);
            tr_aa = &tr_aa - &(&(&aw_b * &aw_b) * &dim_b).scale(&half);
            tr_bb = &tr_bb - &(&(&bw_b * &bw_b) * &dim_b).scale(&half);
        }
    }
    Ok(RuledAsymptotics { n: 2, dimension, tr_a, tr_b, tr_ab, tr_aa, tr_bb })
}

/// Closed-form modified Futaki invariant of the slope-c deformation.
///
/// The whole-surface value carries the conventional overall factor c0
/// relative to the plain definition F(alpha) - <alpha,beta>/<beta,beta>
/// F(beta); the two pair values are the plain definition.  All three
/// vanish at c = 0 and c = m and are positive for small m, with sign
/// changes governed by [`instability_thresholds`].
pub fn ruled_relative_futaki(m: &Rat, c: &Rat, mode: RuledMode) -> Result<Rat> {
    validate_slopes(m, c)?;
    let q = m * m + rat_int(6) * m + rat_int(6);
    let cubic = m * m * m - rat_int(3) * m * m - rat_int(9) * m - rat_int(6);
    let value = match mode {
        RuledMode::WholeSurface => {
            let bracket = (rat_int(2) * m + rat_int(2)) * c * c
                - (m * m - rat_int(4) * m - rat_int(6)) * c
                + &q;
            c * (m - c) * (m + rat_int(2)) / (rat_int(4) * &q) * bracket
        }
        RuledMode::PairSInfinity => {
            let bracket = (rat_int(2) * m * m + rat_int(4) * m + rat_int(3)) * c - &cubic;
            c * c * (m - c) / (rat_int(2) * m * m * &q) * bracket
        }
        RuledMode::PairSZero => {
            let bracket = (m - rat_int(3)) * (m + rat_int(1)) * c - &cubic;
            c * c * (m - c) / (rat_int(2) * m * m * &q) * bracket
        }
    };
    Ok(value)
}

/// Comparison of the dimension-defect slope against the adjunction slope
/// for a pair, plus the order-of-vanishing sign of the relative invariant
/// at c = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NondegeneracyReport {
    /// Subleading over leading coefficient of the pair dimension count.
    pub c1_over_c0: Rat,
    /// Adjunction ratio alpha_2 / alpha_1 of the section being paired.
    pub alpha2_over_alpha1: Rat,
    /// Whether c1/c0 < alpha2/alpha1 (the unmodified invariant is then
    /// negative for small c).
    pub plain_condition_holds: bool,
    /// Whether the relative invariant is positive to leading order c^2,
    /// equivalently whether the slope lies below the cubic threshold.
    pub relative_vanishing_order_ok: bool,
}

/// Everything the pipeline knows about one (m, c, mode) evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct RuledFutakiReport {
    pub m: Rat,
    pub c: Rat,
    pub mode: RuledMode,
    pub alpha: WeightAsymptotics,
    pub beta: WeightAsymptotics,
    pub products: FutakiProducts,
    /// Closed-form value, normalized as in [`ruled_relative_futaki`].
    pub closed_form: Rat,
    pub nondegeneracy: Option<NondegeneracyReport>,
}

/// Runs the symbolic pipeline and the closed form side by side.
pub fn ruled_futaki_report(m: &Rat, c: &Rat, mode: RuledMode) -> Result<RuledFutakiReport> {
    let sym = ruled_symbolic_asymptotics(m, c, mode)?;
    let (alpha, beta) = sym.action_pair()?;
    let products = futaki_and_products(&alpha, Some(&beta))?;
    let closed_form = ruled_relative_futaki(m, c, mode)?;
    let nondegeneracy = match mode {
        RuledMode::WholeSurface => None,
        RuledMode::PairSInfinity | RuledMode::PairSZero => {
            let c0 = (m * m + rat_int(2) * m) / rat_int(2);
            // alpha_1 = L.D and alpha_2 = -(K+D).D/2 for the section D
            // being paired; both sections have (K+D).D = 2 by adjunction
            // (genus-2 base), while L.S_inf = 1 and L.S0 = 1 + m.
            let (c1_pair, alpha1) = match mode {
                RuledMode::PairSInfinity => ((rat_int(1) - m) / rat_int(2), rat_int(1)),
                _ => ((rat_int(1) - rat_int(2) * m) / rat_int(2), rat_int(1) + m),
            };
            let cubic = m * m * m - rat_int(3) * m * m - rat_int(9) * m - rat_int(6);
            let c1_over_c0 = &c1_pair / &c0;
            let alpha2_over_alpha1 = rat_int(-1) / &alpha1;
            Some(NondegeneracyReport {
                plain_condition_holds: c1_over_c0 < alpha2_over_alpha1,
                relative_vanishing_order_ok: cubic < rat_int(0),
                c1_over_c0,
                alpha2_over_alpha1,
            })
        }
    };
    Ok(RuledFutakiReport {
        m: m.clone(),
        c: c.clone(),
        mode,
        alpha,
        beta,
        products,
        closed_form,
        nondegeneracy,
    })
}

/// Certified isolating intervals for the two slope thresholds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    /// Positive root of the quartic governing the whole-surface sign.
    pub k1: RootInterval,
    /// Positive root of the cubic governing the pair sign at small c.
    pub k2: RootInterval,
    pub k1_positive_root_count: usize,
    pub k2_positive_root_count: usize,
}

impl ThresholdReport {
    pub fn k1_bounds(&self) -> (Rat, Rat) {
        (self.k1.lo.clone(), self.k1.hi.clone())
    }

    pub fn k2_bounds(&self) -> (Rat, Rat) {
        (self.k2.lo.clone(), self.k2.hi.clone())
    }
}

fn positive_root(p: &Poly, precision: &Rat) -> Result<(RootInterval, usize)> {
    let bound = cauchy_root_bound(p);
    let count = count_roots_open(p, &rat_int(0), &bound)?;
    let intervals = isolate_real_roots(p)?;
    // Exactly one positive root for both threshold polynomials, so the
    // rightmost isolating interval contains it.
    let mut interval = intervals
        .into_iter()
        .last()
        .ok_or_else(|| FutakiError::ParameterRange("polynomial has no real roots".into()))?;
    interval = refine_root(p, &interval, precision);
    let mut width = precision.clone();
    while interval.lo <= rat_int(0) && !interval.is_exact() {
        width /= rat_int(4);
        interval = refine_root(p, &interval, &width);
    }
    Ok((interval, count))
}

/// Isolates the two threshold slopes to the requested interval width.
///
/// Below k1 the whole-surface invariant is positive for every admissible
/// c; above it some c makes it negative.  k2 plays the same role for the
/// leading order of both pair invariants at c = 0.
pub fn instability_thresholds(precision: &Rat) -> Result<ThresholdReport> {
    if *precision <= rat_int(0) {
        return Err(FutakiError::ParameterRange("precision must be positive".into()));
    }
    let quartic = Poly::new(vec![
        rat_int(-12),
        rat_int(-48),
        rat_int(-52),
        rat_int(-16),
        rat_int(1),
    ]);
    let cubic = Poly::new(vec![rat_int(-6), rat_int(-9), rat_int(-3), rat_int(1)]);
    let (k1, k1_count) = positive_root(&quartic, precision)?;
    let (k2, k2_count) = positive_root(&cubic, precision)?;
    Ok(ThresholdReport {
        k1,
        k2,
        k1_positive_root_count: k1_count,
        k2_positive_root_count: k2_count,
    })
}
