//! Exact rational covering LPs: minimize the total weight of a set family
//! subject to every ground element being covered with total weight at least
//! one. Solved by a dense two-phase primal simplex with Bland's rule, so
//! every pivot is exact and termination is guaranteed. Duals are read off the
//! artificial columns and every solve carries a full optimality certificate.

use crate::rational::Rational;
use num::{One, Zero};
use std::collections::BTreeSet;

/// min sum(x) subject to: for every element v in 0..n, the columns
/// containing v carry total weight at least 1; x >= 0.
#[derive(Debug, Clone)]
pub struct CoverLp {
    pub n: usize,
    pub columns: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub value: Rational,
    /// weight per column, in column order
    pub primal: Vec<Rational>,
    /// dual value per ground element
    pub dual: Vec<Rational>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LpError {
    #[error("element {element} appears in no column")]
    Uncovered { element: usize },
    #[error("column {column} contains out-of-range element {element}")]
    ElementOutOfRange { column: usize, element: usize },
    #[error("simplex iteration limit {limit} exceeded")]
    IterationLimit { limit: usize },
    #[error("phase 1 ended with positive infeasibility {residual}")]
    Infeasible { residual: Rational },
    #[error("pricing returned an existing column with weight {weight} > 1")]
    PricingStall { weight: Rational },
}

const MAX_PIVOTS: usize = 200_000;
const STALL_LIMIT: usize = 30;

struct Tableau {
    /// rows[i] = coefficients over all variables, then the rhs
    rows: Vec<Vec<Rational>>,
    /// reduced-cost row, same width as rows (rhs slot = negated objective)
    obj: Vec<Rational>,
    /// basic variable per row
    basis: Vec<usize>,
    /// original ground element per row (rows can be deleted as redundant)
    row_element: Vec<usize>,
    vars: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        for cell in self.rows[r].iter_mut() {
            *cell = &*cell / &p;
        }
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][j].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..=self.vars {
                let delta = &self.rows[r][c] * &factor;
                self.rows[i][c] = &self.rows[i][c] - &delta;
            }
        }
        let factor = self.obj[j].clone();
        if !factor.is_zero() {
            for c in 0..=self.vars {
                let delta = &self.rows[r][c] * &factor;
                self.obj[c] = &self.obj[c] - &delta;
            }
        }
        self.basis[r] = j;
    }

    /// Entering column by Dantzig's rule (most negative reduced cost) while
    /// progress is made; after `STALL_LIMIT` consecutive degenerate pivots
    /// the rule switches to Bland's (lowest eligible index) until the
    /// objective moves again, which rules out cycling. Leaving row by the
    /// ratio test, ties broken by lowest basic variable index.
    fn run_simplex(&mut self, eligible: &dyn Fn(usize) -> bool, budget: &mut usize) -> Result<(), LpError> {
        let mut stall = 0usize;
        loop {
            let entering = if stall >= STALL_LIMIT {
                (0..self.vars).find(|&j| eligible(j) && self.obj[j] < Rational::zero())
            } else {
                (0..self.vars)
                    .filter(|&j| eligible(j) && self.obj[j] < Rational::zero())
                    .min_by(|&a, &b| self.obj[a].cmp(&self.obj[b]).then(a.cmp(&b)))
            };
            let Some(j) = entering else { return Ok(()) };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][j] > Rational::zero() {
                    let ratio = &self.rows[i][self.vars] / &self.rows[i][j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            // a covering LP with nonnegative costs is never unbounded, so a
            // missing leaving row would be an internal inconsistency
            let (r, _) = leave.expect("covering LP cannot be unbounded");
            if *budget == 0 {
                return Err(LpError::IterationLimit { limit: MAX_PIVOTS });
            }
            *budget -= 1;
            if self.rows[r][self.vars].is_zero() {
                stall += 1;
            } else {
                stall = 0;
            }
            self.pivot(r, j);
        }
    }
}

pub fn solve_exact(lp: &CoverLp) -> Result<LpResult, LpError> {
    let n = lp.n;
    let k = lp.columns.len();
    for (ci, col) in lp.columns.iter().enumerate() {
        if let Some(&bad) = col.iter().find(|&&v| v >= n) {
            return Err(LpError::ElementOutOfRange { column: ci, element: bad });
        }
    }
    for v in 0..n {
        if !lp.columns.iter().any(|c| c.contains(&v)) {
            return Err(LpError::Uncovered { element: v });
        }
    }
    if n == 0 {
        return Ok(LpResult { value: Rational::zero(), primal: vec![Rational::zero(); k], dual: vec![] });
    }

    // variable layout: columns, surplus, artificials
    let surplus = k;
    let art = k + n;
    let vars = k + 2 * n;
    let mut rows = Vec::with_capacity(n);
    for v in 0..n {
        let mut row = vec![Rational::zero(); vars + 1];
        for (ci, col) in lp.columns.iter().enumerate() {
            if col.contains(&v) {
                row[ci] = Rational::one();
            }
        }
        row[surplus + v] = -Rational::one();
        row[art + v] = Rational::one();
        row[vars] = Rational::one();
        rows.push(row);
    }
    // a singleton column per element is an identity block, so those columns
    // form a feasible starting basis and phase 1 can be skipped
    let mut singleton: Vec<Option<usize>> = vec![None; n];
    for (ci, col) in lp.columns.iter().enumerate() {
        if col.len() == 1 {
            let v = *col.iter().next().expect("nonempty");
            singleton[v].get_or_insert(ci);
        }
    }
    let mut budget = MAX_PIVOTS;
    let mut t;
    if singleton.iter().all(Option::is_some) {
        let basis: Vec<usize> = singleton.into_iter().map(|s| s.expect("checked")).collect();
        let obj = vec![Rational::zero(); vars + 1];
        t = Tableau { rows, obj, basis, row_element: (0..n).collect(), vars };
    } else {
        let basis: Vec<usize> = (0..n).map(|v| art + v).collect();

        // phase 1 objective: minimize total artificial weight; reduced costs
        // start as c minus the sum of the basic (artificial) rows
        let mut obj = vec![Rational::zero(); vars + 1];
        for v in 0..n {
            obj[art + v] = Rational::one();
        }
        for row in &rows {
            for c in 0..=vars {
                obj[c] = &obj[c] - &row[c];
            }
        }
        t = Tableau { rows, obj, basis, row_element: (0..n).collect(), vars };
        t.run_simplex(&|_| true, &mut budget)?;
        let residual = -t.obj[vars].clone();
        if !residual.is_zero() {
            return Err(LpError::Infeasible { residual });
        }

        // drive leftover artificials out of the basis; a row with no usable
        // pivot entry is redundant and gets deleted
        while let Some(r) = (0..t.rows.len()).find(|&i| t.basis[i] >= art) {
            match (0..art).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.basis.remove(r);
                    t.row_element.remove(r);
                }
            }
        }
    }

    // phase 2 objective: unit cost per real column, so the reduction
    // subtracts each row whose basic variable is a real column
    let mut obj = vec![Rational::zero(); vars + 1];
    for o in obj.iter_mut().take(k) {
        *o = Rational::one();
    }
    for (i, row) in t.rows.iter().enumerate() {
        if t.basis[i] < k {
            for c in 0..=vars {
                obj[c] = &obj[c] - &row[c];
            }
        }
    }
    t.obj = obj;
    t.run_simplex(&|j| j < art, &mut budget)?;

    let mut primal = vec![Rational::zero(); k];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < k {
            primal[b] = t.rows[i][t.vars].clone();
        }
    }
    let value: Rational = primal.iter().sum();
    let mut dual = vec![Rational::zero(); n];
    for &v in &t.row_element {
        dual[v] = -t.obj[art + v].clone();
    }
    Ok(LpResult { value, primal, dual })
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("primal weight for column {column} is negative")]
    NegativePrimal { column: usize },
    #[error("element {element} covered with total weight {total} < 1")]
    CoverageShort { element: usize, total: Rational },
    #[error("dual value for element {element} is negative")]
    NegativeDual { element: usize },
    #[error("column {column} has dual load {load} > 1")]
    DualOverload { column: usize, load: Rational },
    #[error("objective mismatch: primal {primal}, dual {dual}, reported {reported}")]
    ObjectiveMismatch { primal: Rational, dual: Rational, reported: Rational },
    #[error("certificate has wrong dimensions")]
    Shape,
}

/// Re-derives optimality from scratch: primal feasibility, dual feasibility,
/// and equal objective values. Independent of the solver internals.
pub fn check_certificate(lp: &CoverLp, res: &LpResult) -> Result<(), CertificateError> {
    if res.primal.len() != lp.columns.len() || res.dual.len() != lp.n {
        return Err(CertificateError::Shape);
    }
    for (ci, x) in res.primal.iter().enumerate() {
        if x < &Rational::zero() {
            return Err(CertificateError::NegativePrimal { column: ci });
        }
    }
    for v in 0..lp.n {
        let total: Rational = lp
            .columns
            .iter()
            .zip(&res.primal)
            .filter(|(c, _)| c.contains(&v))
            .map(|(_, x)| x.clone())
            .sum();
        if total < Rational::one() {
            return Err(CertificateError::CoverageShort { element: v, total });
        }
    }
    for (v, y) in res.dual.iter().enumerate() {
        if y < &Rational::zero() {
            return Err(CertificateError::NegativeDual { element: v });
        }
    }
    for (ci, col) in lp.columns.iter().enumerate() {
        let load: Rational = col.iter().map(|&v| res.dual[v].clone()).sum();
        if load > Rational::one() {
            return Err(CertificateError::DualOverload { column: ci, load });
        }
    }
    let primal: Rational = res.primal.iter().sum();
    let dual: Rational = res.dual.iter().sum();
    if primal != dual || primal != res.value {
        return Err(CertificateError::ObjectiveMismatch { primal, dual, reported: res.value.clone() });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct PricedColumn {
    pub set: BTreeSet<usize>,
    pub weight: Rational,
    /// further columns offered alongside the priced one, typically pieces
    /// of a decomposable pricing solution
    pub extras: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Clone)]
pub struct ColumnGeneration {
    pub result: LpResult,
    pub columns: Vec<BTreeSet<usize>>,
    /// master LP solves performed
    pub iterations: usize,
    /// final pricing optimum; at most 1 certifies global optimality
    pub pricing_bound: Rational,
}

const MAX_ROUNDS: usize = 10_000;

/// Delayed column generation: repeatedly solve the master over the current
/// columns and ask `pricer` for a maximum-dual-weight feasible set. A pricing
/// optimum of at most 1 proves the master optimum solves the full LP.
pub fn column_generation(
    n: usize,
    seed: Vec<BTreeSet<usize>>,
    mut pricer: impl FnMut(&[Rational]) -> PricedColumn,
) -> Result<ColumnGeneration, LpError> {
    let mut columns = seed;
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > MAX_ROUNDS {
            return Err(LpError::IterationLimit { limit: MAX_ROUNDS });
        }
        let lp = CoverLp { n, columns };
        let result = solve_exact(&lp)?;
        let priced = pricer(&result.dual);
        let CoverLp { columns: cols, .. } = lp;
        if priced.weight <= Rational::one() {
            return Ok(ColumnGeneration { result, columns: cols, iterations, pricing_bound: priced.weight });
        }
        // an improving column must be new: existing columns price at most 1
        // at master optimality
        if cols.contains(&priced.set) {
            return Err(LpError::PricingStall { weight: priced.weight });
        }
        columns = cols;
        columns.push(priced.set);
        for extra in priced.extras {
            if !columns.contains(&extra) {
                columns.push(extra);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn set(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    #[test]
    fn singleton_cover_costs_n() {
        let lp = CoverLp { n: 3, columns: vec![set(&[0]), set(&[1]), set(&[2])] };
        let res = solve_exact(&lp).unwrap();
        assert_eq!(res.value, int(3));
        check_certificate(&lp, &res).unwrap();
    }

    #[test]
    fn triangle_pair_cover_is_three_halves() {
        // ground {0,1,2}, columns = all pairs: optimum picks each pair 1/2
        let lp = CoverLp { n: 3, columns: vec![set(&[0, 1]), set(&[0, 2]), set(&[1, 2])] };
        let res = solve_exact(&lp).unwrap();
        assert_eq!(res.value, rat(3, 2));
        assert_eq!(res.dual, vec![rat(1, 2), rat(1, 2), rat(1, 2)]);
        check_certificate(&lp, &res).unwrap();
    }

    #[test]
    fn five_cycle_pair_cover() {
        // columns = consecutive pairs of a 5-cycle; optimum 5/2
        let cols: Vec<_> = (0..5).map(|i| set(&[i, (i + 1) % 5])).collect();
        let lp = CoverLp { n: 5, columns: cols };
        let res = solve_exact(&lp).unwrap();
        assert_eq!(res.value, rat(5, 2));
        check_certificate(&lp, &res).unwrap();
    }

    #[test]
    fn redundant_duplicate_rows_are_handled() {
        // elements 0 and 1 appear in exactly the same columns, making the
        // two constraint rows identical
        let lp = CoverLp { n: 2, columns: vec![set(&[0, 1]), set(&[0, 1])] };
        let res = solve_exact(&lp).unwrap();
        assert_eq!(res.value, int(1));
        check_certificate(&lp, &res).unwrap();
    }

    #[test]
    fn uncovered_element_is_rejected() {
        let lp = CoverLp { n: 2, columns: vec![set(&[0])] };
        assert_eq!(solve_exact(&lp).unwrap_err(), LpError::Uncovered { element: 1 });
    }

    #[test]
    fn out_of_range_element_is_rejected() {
        let lp = CoverLp { n: 2, columns: vec![set(&[0, 5])] };
        assert_eq!(solve_exact(&lp).unwrap_err(), LpError::ElementOutOfRange { column: 0, element: 5 });
    }

    #[test]
    fn empty_ground_set_solves_to_zero() {
        let lp = CoverLp { n: 0, columns: vec![] };
        let res = solve_exact(&lp).unwrap();
        assert_eq!(res.value, int(0));
        check_certificate(&lp, &res).unwrap();
    }

    #[test]
    fn certificate_checker_rejects_tampering() {
        let lp = CoverLp { n: 2, columns: vec![set(&[0]), set(&[1])] };
        let mut res = solve_exact(&lp).unwrap();
        res.dual[0] = int(2);
        assert!(check_certificate(&lp, &res).is_err());
    }

    #[test]
    fn column_generation_reaches_pair_optimum() {
        // start from singletons over a 3-element ground set; pricing offers
        // pair columns whenever they are improving
        let pairs = [set(&[0, 1]), set(&[0, 2]), set(&[1, 2])];
        let out = column_generation(3, vec![set(&[0]), set(&[1]), set(&[2])], |dual| {
            let best = pairs
                .iter()
                .max_by_key(|c| c.iter().map(|&v| dual[v].clone()).sum::<Rational>())
                .unwrap();
            let weight = best.iter().map(|&v| dual[v].clone()).sum();
            PricedColumn { set: best.clone(), weight, extras: vec![] }
        })
        .unwrap();
        assert_eq!(out.result.value, rat(3, 2));
        assert!(out.pricing_bound <= int(1));
        let lp = CoverLp { n: 3, columns: out.columns.clone() };
        check_certificate(&lp, &out.result).unwrap();
    }
}
