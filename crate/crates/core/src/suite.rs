//! The standard verification matrix: every identity family the crate
//! can check, packaged as enumerable cases with stable sort keys, a
//! uniform report format, and serial or parallel runners that produce
//! identical output.

use crate::afflattice::LevelZeroDominant;
use crate::exactring::TPoint;
use crate::oracles::{psi_series, TruncBivar};
use crate::qrep::{
    measure_constants, translation_ratio, verify_embedding_structure,
    verify_lemma_expansions, verify_relations,
};
use crate::report::Report;
use crate::shapes::{horizontal_strips, partitions_up_to, Partition};
use crate::symfun::{
    lr_coefficient, macdonald_gl, macdonald_t0, psi_coefficient,
    psi_t0_closed_form, schur, ExpMap, GLPolyQ,
};
use crate::{demchar, exactring::LaurentQ};
use rayon::prelude::*;
use serde_json::json;

/// One runnable verification case. Every variant is self-describing:
/// its parameters pin down the exact identity instances it checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuiteCase {
    /// Macdonald polynomials collapse to Schur polynomials at `t = q`,
    /// for all shapes of size at most `size` in `nvars` variables.
    MacdonaldSchurCollapse { size: u64, nvars: usize },
    /// The generic Macdonald expansion at `t = 0` equals the dedicated
    /// `t = 0` expansion, and every strip coefficient at `t = 0` equals
    /// the Gaussian-binomial product, for outer shapes up to `size`.
    TZeroSpecialization { size: u64 },
    /// The telescoped strip coefficient matches the truncated
    /// infinite-product series oracle through total degree `order`.
    PsiOracleGate { size: u64, order: i64 },
    /// Littlewood-Richardson coefficient axioms: symmetry, the two
    /// vanishing conditions, and normalization.
    LrAxioms { size: u64 },
    /// Two-alphabet Schur expansion rebuilt from Littlewood-Richardson
    /// coefficients, `k` and `l` variables per alphabet.
    LrReconstruction { size: u64, k: usize, l: usize },
    /// Graded-character sum decomposition of one identity Demazure
    /// submodule into its strip pieces.
    SumDecomposition { rank: usize, mults: Vec<u64>, order: i64 },
    /// Branching of the m-th multiple of one fundamental weight, total
    /// and refined per piece.
    Branching { n: usize, i: usize, m: u64, order: i64 },
    /// The two extreme direct-sum pieces of a mixed weight against their
    /// closed-form product descriptions.
    EdgePieces { rank: usize, mults: Vec<u64>, order: i64 },
    /// Defining relations of the quantum affine algebra on one tensor
    /// model.
    Relations { n1: usize, factors: Vec<usize>, kmax: i32 },
    /// Closed-form divided-power expansions on fundamental tensors.
    DividedExpansions { n: usize, mmax: usize, kmax: i32 },
    /// Structural checks of the rank-raising embedding for one sign
    /// convention.
    EmbeddingStructure { n: usize, eps: i8, kmax: i32 },
    /// Transport-ratio constants: integrality, stability under the
    /// energy window, and the doubling law for squared translations.
    ConstantsCoherence { n: usize },
}

impl SuiteCase {
    /// Stable sort and display key. Reports are always emitted in key
    /// order, so serial and parallel runs agree byte for byte.
    pub fn key(&self) -> String {
        match self {
            SuiteCase::MacdonaldSchurCollapse { size, nvars } => {
                format!("01-macdonald-schur/size{}/vars{}", size, nvars)
            }
            SuiteCase::TZeroSpecialization { size } => {
                format!("02-t-zero/size{}", size)
            }
            SuiteCase::PsiOracleGate { size, order } => {
                format!("03-psi-oracle/size{}/order{}", size, order)
            }
            SuiteCase::LrAxioms { size } => format!("04-lr-axioms/size{}", size),
            SuiteCase::LrReconstruction { size, k, l } => {
                format!("04-lr-rebuild/size{}/{}x{}", size, k, l)
            }
            SuiteCase::SumDecomposition { rank, mults, order } => {
                format!("05-sum/rank{}/m{}/order{}", rank, join(mults), order)
            }
            SuiteCase::Branching { n, i, m, order } => {
                format!("06-branching/n{}/i{}/m{}/order{}", n, i, m, order)
            }
            SuiteCase::EdgePieces { rank, mults, order } => {
                format!("06-edges/rank{}/m{}/order{}", rank, join(mults), order)
            }
            SuiteCase::Relations { n1, factors, kmax } => {
                format!("07-relations/n1_{}/f{}/K{}", n1, join_usize(factors), kmax)
            }
            SuiteCase::DividedExpansions { n, mmax, kmax } => {
                format!("08-expansions/n{}/m{}/K{}", n, mmax, kmax)
            }
            SuiteCase::EmbeddingStructure { n, eps, kmax } => {
                format!("09-structure/n{}/eps{:+}/K{}", n, eps, kmax)
            }
            SuiteCase::ConstantsCoherence { n } => format!("10-constants/n{}", n),
        }
    }

    pub fn run(&self) -> Report {
        match self {
            SuiteCase::MacdonaldSchurCollapse { size, nvars } => {
                run_macdonald_schur(*size, *nvars)
            }
            SuiteCase::TZeroSpecialization { size } => run_t_zero(*size),
            SuiteCase::PsiOracleGate { size, order } => run_psi_oracle(*size, *order),
            SuiteCase::LrAxioms { size } => run_lr_axioms(*size),
            SuiteCase::LrReconstruction { size, k, l } => {
                run_lr_reconstruction(*size, *k, *l)
            }
            SuiteCase::SumDecomposition { rank, mults, order } => {
                demchar::verify_sum_decomposition(
                    &LevelZeroDominant::new(*rank, mults.clone()),
                    *order,
                )
            }
            SuiteCase::Branching { n, i, m, order } => {
                demchar::verify_branching(*n, *i, *m, *order)
            }
            SuiteCase::EdgePieces { rank, mults, order } => {
                demchar::verify_edge_pieces(
                    &LevelZeroDominant::new(*rank, mults.clone()),
                    *order,
                )
            }
            SuiteCase::Relations { n1, factors, kmax } => {
                verify_relations(*n1, factors, *kmax)
            }
            SuiteCase::DividedExpansions { n, mmax, kmax } => {
                verify_lemma_expansions(*n, *mmax, *kmax)
            }
            SuiteCase::EmbeddingStructure { n, eps, kmax } => {
                verify_embedding_structure(*n, *eps, *kmax)
            }
            SuiteCase::ConstantsCoherence { n } => run_constants_coherence(*n),
        }
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn join_usize(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn run_macdonald_schur(size: u64, nvars: usize) -> Report {
    let case = json!({"check": "macdonald-schur", "size": size, "nvars": nvars});
    let mut shapes = 0u64;
    for shape in partitions_up_to(size, nvars) {
        let mac = macdonald_gl(&shape, nvars);
        let sch = schur(&shape, nvars);
        if mac.num_terms() != sch.num_terms() {
            return Report::fail(
                case.clone(),
                json!({"shape": shape.to_string(), "reason": "support differs"}),
            );
        }
        for (exps, c) in sch.terms() {
            let collapsed = mac
                .coeff(exps)
                .and_then(|f| f.eval_t(TPoint::Q).ok());
            if collapsed.as_ref() != Some(c) {
                return Report::fail(
                    case.clone(),
                    json!({"shape": shape.to_string(), "exps": exps}),
                );
            }
        }
        shapes += 1;
    }
    Report::pass(case).with_detail(format!("{} shapes", shapes))
}

fn run_t_zero(size: u64) -> Report {
    let case = json!({"check": "t-zero", "size": size});
    let mut expansions = 0u64;
    let mut strips = 0u64;
    for shape in partitions_up_to(size, size as usize) {
        let nvars = shape.len().max(1);
        let generic = macdonald_gl(&shape, nvars);
        let direct = macdonald_t0(&shape, nvars);
        if generic.num_terms() != direct.num_terms() {
            return Report::fail(
                case.clone(),
                json!({"shape": shape.to_string(), "reason": "support differs"}),
            );
        }
        for (exps, c) in direct.terms() {
            let specialized = generic
                .coeff(exps)
                .and_then(|f| f.eval_t(TPoint::Zero).ok());
            if specialized.as_ref() != Some(c) {
                return Report::fail(
                    case.clone(),
                    json!({"shape": shape.to_string(), "exps": exps}),
                );
            }
        }
        expansions += 1;
        for inner in horizontal_strips(&shape, shape.len()) {
            let f = psi_coefficient(&shape, &inner);
            let at_zero = match f.eval_t(TPoint::Zero) {
                Ok(v) => v,
                Err(_) => {
                    return Report::fail(
                        case.clone(),
                        json!({"outer": shape.to_string(), "inner": inner.to_string()}),
                    )
                }
            };
            if at_zero != psi_t0_closed_form(&shape, &inner) {
                return Report::fail(
                    case.clone(),
                    json!({"outer": shape.to_string(), "inner": inner.to_string()}),
                );
            }
            strips += 1;
        }
    }
    Report::pass(case)
        .with_detail(format!("{} expansions, {} strip coefficients", expansions, strips))
}

fn run_psi_oracle(size: u64, order: i64) -> Report {
    let case = json!({"check": "psi-oracle", "size": size, "order": order});
    let mut strips = 0u64;
    for outer in partitions_up_to(size, size as usize) {
        for inner in horizontal_strips(&outer, outer.len()) {
            let oracle = psi_series(&outer, &inner, order);
            let f = psi_coefficient(&outer, &inner);
            let num = TruncBivar::from_polyqt(f.num(), order);
            let den = TruncBivar::from_polyqt(f.den(), order);
            if oracle.mul(&den) != num {
                return Report::fail(
                    case.clone(),
                    json!({"outer": outer.to_string(), "inner": inner.to_string()}),
                );
            }
            strips += 1;
        }
    }
    Report::pass(case).with_detail(format!("{} strip coefficients", strips))
}

fn run_lr_axioms(size: u64) -> Report {
    let case = json!({"check": "lr-axioms", "size": size});
    let smaller = partitions_up_to(size, size as usize);
    let mut triples = 0u64;
    for lam in partitions_up_to(size, size as usize) {
        // normalization
        if lr_coefficient(&lam, &lam, &Partition::empty()) != 1 {
            return Report::fail(case.clone(), json!({"lam": lam.to_string(), "axiom": "unit"}));
        }
        for mu in &smaller {
            for nu in &smaller {
                let c = lr_coefficient(&lam, mu, nu);
                triples += 1;
                // size vanishing
                if mu.size() + nu.size() != lam.size() {
                    if c != 0 {
                        return Report::fail(
                            case.clone(),
                            json!({
                                "lam": lam.to_string(), "mu": mu.to_string(),
                                "nu": nu.to_string(), "axiom": "size",
                            }),
                        );
                    }
                    continue;
                }
                // containment vanishing
                if !lam.contains(mu) && c != 0 {
                    return Report::fail(
                        case.clone(),
                        json!({
                            "lam": lam.to_string(), "mu": mu.to_string(),
                            "nu": nu.to_string(), "axiom": "containment",
                        }),
                    );
                }
                // symmetry
                if c != lr_coefficient(&lam, nu, mu) {
                    return Report::fail(
                        case.clone(),
                        json!({
                            "lam": lam.to_string(), "mu": mu.to_string(),
                            "nu": nu.to_string(), "axiom": "symmetry",
                        }),
                    );
                }
            }
        }
    }
    Report::pass(case).with_detail(format!("{} triples", triples))
}

fn run_lr_reconstruction(size: u64, k: usize, l: usize) -> Report {
    let case = json!({"check": "lr-rebuild", "size": size, "k": k, "l": l});
    let mut shapes = 0u64;
    for lam in partitions_up_to(size, k + l) {
        let whole = schur(&lam, k + l);
        let mut rebuilt: GLPolyQ = ExpMap::zero(k + l);
        for mu in partitions_up_to(lam.size(), k) {
            for nu in partitions_up_to(lam.size(), l) {
                if mu.size() + nu.size() != lam.size() {
                    continue;
                }
                let c = lr_coefficient(&lam, &mu, &nu);
                if c == 0 {
                    continue;
                }
                let cq = LaurentQ::from_int(c as i64);
                let left = schur(&mu, k);
                let right = schur(&nu, l);
                for (em, cm) in left.terms() {
                    for (en, cn) in right.terms() {
                        let mut exps = em.clone();
                        exps.extend_from_slice(en);
                        rebuilt.add_term(exps, cm.mul(cn).mul(&cq));
                    }
                }
            }
        }
        if rebuilt != whole {
            return Report::fail(case.clone(), json!({"lam": lam.to_string()}));
        }
        shapes += 1;
    }
    Report::pass(case).with_detail(format!("{} shapes", shapes))
}

fn run_constants_coherence(n: usize) -> Report {
    let case = json!({"check": "constants", "n": n});
    let mut checks = 0u64;
    for eps in [1i8, -1] {
        let tight = match measure_constants(n, eps, 2) {
            Ok(c) => c,
            Err(e) => return Report::fail(case.clone(), json!({"eps": eps, "error": e.to_string()})),
        };
        let wide = match measure_constants(n, eps, 3) {
            Ok(c) => c,
            Err(e) => return Report::fail(case.clone(), json!({"eps": eps, "error": e.to_string()})),
        };
        if tight != wide {
            return Report::fail(case.clone(), json!({"eps": eps, "reason": "window instability"}));
        }
        checks += 2;
        // doubling law: the squared translation doubles the exponent
        for (&i, &b) in &wide.b {
            match translation_ratio(n, eps, i, 2, 3) {
                Ok(doubled) if doubled == 2 * b => checks += 1,
                Ok(doubled) => {
                    return Report::fail(
                        case.clone(),
                        json!({"eps": eps, "i": i, "b": b, "doubled": doubled}),
                    )
                }
                Err(e) => {
                    return Report::fail(case.clone(), json!({"eps": eps, "i": i, "error": e.to_string()}))
                }
            }
        }
    }
    Report::pass(case).with_detail(format!("{} coherence checks", checks))
}

/// All multiplicity vectors of the given length with entry sum in
/// `1..=total`.
fn mult_vectors(len: usize, total: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &out {
            let used: u64 = v.iter().sum();
            for m in 0..=total - used {
                let mut v2 = v.clone();
                v2.push(m);
                next.push(v2);
            }
        }
        out = next;
    }
    out.retain(|v| v.iter().sum::<u64>() >= 1);
    out
}

fn factor_signatures(n1: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    let mut all = Vec::new();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for v in &out {
            for i in 1..n1 {
                let mut v2 = v.clone();
                v2.push(i);
                next.push(v2);
            }
        }
        all.extend(next.iter().cloned());
        out = next;
    }
    all
}

/// The complete default case matrix, in key order.
pub fn full_matrix(order: i64, kmax: i32) -> Vec<SuiteCase> {
    let mut cases = Vec::new();
    for nvars in 1..=3 {
        cases.push(SuiteCase::MacdonaldSchurCollapse { size: 5, nvars });
    }
    cases.push(SuiteCase::TZeroSpecialization { size: 6 });
    cases.push(SuiteCase::PsiOracleGate { size: 4, order: 40 });
    cases.push(SuiteCase::LrAxioms { size: 6 });
    cases.push(SuiteCase::LrReconstruction { size: 4, k: 2, l: 2 });
    for rank in 1..=3 {
        for mults in mult_vectors(rank, 3) {
            cases.push(SuiteCase::SumDecomposition { rank, mults, order });
        }
    }
    for n in 2..=3 {
        for i in 1..=n {
            for m in 1..=3 {
                cases.push(SuiteCase::Branching { n, i, m, order });
            }
        }
    }
    for rank in 2..=3 {
        for mults in mult_vectors(rank, 3) {
            if mults.iter().filter(|&&m| m > 0).count() >= 2 {
                cases.push(SuiteCase::EdgePieces { rank, mults, order });
            }
        }
    }
    for n1 in 2..=3 {
        for factors in factor_signatures(n1, 3) {
            cases.push(SuiteCase::Relations { n1, factors, kmax: kmax.max(4) });
        }
    }
    for n in 2..=3 {
        cases.push(SuiteCase::DividedExpansions { n, mmax: 3, kmax });
        for eps in [1, -1] {
            cases.push(SuiteCase::EmbeddingStructure { n, eps, kmax });
        }
        cases.push(SuiteCase::ConstantsCoherence { n });
    }
    cases.sort_by_key(|c| c.key());
    cases
}

/// Run the cases in key order, optionally fanning out to a thread pool.
/// The report list is identical either way.
pub fn run_matrix(cases: &[SuiteCase], parallel: bool) -> Vec<(String, Report)> {
    let mut sorted: Vec<&SuiteCase> = cases.iter().collect();
    sorted.sort_by_key(|c| c.key());
    if parallel {
        sorted.par_iter().map(|c| (c.key(), c.run())).collect()
    } else {
        sorted.iter().map(|c| (c.key(), c.run())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_unique_and_sorted() {
        let cases = full_matrix(6, 3);
        let keys: Vec<String> = cases.iter().map(|c| c.key()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted, "matrix keys must be unique and in order");
        assert!(cases.len() > 60, "matrix unexpectedly small: {}", cases.len());
    }

    #[test]
    fn symmetric_function_families_pass_quickly() {
        assert!(run_macdonald_schur(3, 2).is_pass());
        assert!(run_t_zero(3).is_pass());
        assert!(run_psi_oracle(3, 12).is_pass());
        assert!(run_lr_axioms(4).is_pass());
        assert!(run_lr_reconstruction(3, 2, 2).is_pass());
    }

    #[test]
    fn constants_family_passes() {
        assert!(run_constants_coherence(2).is_pass());
    }

    #[test]
    fn serial_and_parallel_runs_agree() {
        let cases: Vec<SuiteCase> = vec![
            SuiteCase::MacdonaldSchurCollapse { size: 3, nvars: 2 },
            SuiteCase::SumDecomposition { rank: 2, mults: vec![1, 0], order: 5 },
            SuiteCase::Relations { n1: 2, factors: vec![1], kmax: 4 },
            SuiteCase::Branching { n: 2, i: 1, m: 2, order: 6 },
        ];
        let serial = run_matrix(&cases, false);
        let parallel = run_matrix(&cases, true);
        let ser: Vec<String> = serial
            .iter()
            .map(|(k, r)| format!("{} {}", k, r.to_json()))
            .collect();
        let par: Vec<String> = parallel
            .iter()
            .map(|(k, r)| format!("{} {}", k, r.to_json()))
            .collect();
        assert_eq!(ser, par);
    }
}
