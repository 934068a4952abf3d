//! Acceptance criteria 1 to 10. Each test writes one `PASS`/`FAIL` line to
//! stderr (unbuffered, so it shows up even when output is captured) and then
//! asserts.

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use qiso::problems::{
    check_gutoski_bound, decide_msi, decide_ssi, graph_iso_bruteforce, marginal_product_circuit, reduce_gi_to_ssi,
    reduce_productstate_to_msi, SIInstance, SSIInstance,
};
use qiso::protocols::{
    build_s_g, gs_protocol_with_set, no_case_indistinguishability, relaxed_bound, relaxed_check, run_trials,
    zk_view_distance, GSParams, ProverModel, SniSession, ZkStage,
};
use qiso::qsim::{
    group_twirl_mixture, swap_test_circuit_prob, swap_test_prob, swap_test_sample, trace_distance, DensityMatrix,
};
use qiso::rng::{seeded, SeededRng};
use qiso::stabilizer::{overlap_exact, random_stabilizer, StabilizerOverlap};
use qiso::{Circuit, Gate, Graph, PermGroup, Permutation, PureState};
use rand::seq::SliceRandom;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn report(id: u32, name: &str, ok: bool, detail: String) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr().lock(), "criterion {id:>2} [{verdict}] {name}: {detail}");
    assert!(ok, "criterion {id} failed: {detail}");
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed <= Duration::from_secs(limit_secs)
}

fn five_sigma(freq: f64, p: f64, trials: u64) -> bool {
    (freq - p).abs() <= 5.0 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// `|ψ⟩` and `P_σ|ψ⟩` as preparation circuits.
fn relabel(c: &Circuit, sigma: &Permutation) -> Circuit {
    let mut out = c.clone();
    out.extend(&Circuit::permutation_network(sigma)).unwrap();
    out
}

fn plus_circuit(n: usize) -> Circuit {
    Circuit::pure(n, (0..n).map(Gate::H).collect()).unwrap()
}

fn basis_circuit(n: usize, ones: &[usize]) -> Circuit {
    Circuit::pure(n, ones.iter().map(|&q| Gate::X(q)).collect()).unwrap()
}

/// `max_{σ∈G} |⟨ψ_1|P_σ|ψ_0⟩|` straight from state vectors.
fn dense_max_overlap(inst: &SIInstance) -> f64 {
    let (a, b) = inst.states().unwrap();
    inst.group()
        .enumerate(u64::MAX)
        .unwrap()
        .iter()
        .map(|s| b.inner(&a.permuted(s).unwrap()).unwrap().norm())
        .fold(0.0, f64::max)
}

#[test]
fn criterion_01_swap_test() {
    let start = Instant::now();
    let mut rng = seeded(101);
    let trials = 10_000u64;
    let mut worst_analytic = 0.0f64;
    let mut outliers = 0;
    for i in 0..100 {
        let n = 1 + i % 4;
        let a = PureState::random(n, &mut rng).unwrap();
        let b = PureState::random(n, &mut rng).unwrap();
        let p = swap_test_prob(&a, &b).unwrap();
        let formula = (1.0 + a.inner(&b).unwrap().norm_sqr()) / 2.0;
        let circuit = swap_test_circuit_prob(&a, &b).unwrap();
        worst_analytic = worst_analytic.max((p - formula).abs()).max((circuit - formula).abs());
        let hits = (0..trials).filter(|_| swap_test_sample(&a, &b, &mut rng).unwrap()).count();
        if !five_sigma(hits as f64 / trials as f64, formula, trials) {
            outliers += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        "SWAP test probability and sampling",
        worst_analytic < 1e-12 && outliers == 0 && within(elapsed, 10),
        format!("max analytic error {worst_analytic:.1e}, 5σ outliers {outliers}/100, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_02_stabilizer_overlap() {
    let start = Instant::now();
    let mut rng = seeded(202);
    let (mut worst, mut non_dyadic, mut nonzero) = (0.0f64, 0, 0);
    for i in 0..1000 {
        let n = 1 + i % 6;
        let a = random_stabilizer(n, &mut rng).unwrap();
        // Half the pairs are a short Clifford walk apart, so nonzero overlaps are common.
        let b = if i % 2 == 0 {
            random_stabilizer(n, &mut rng).unwrap()
        } else {
            a.apply_circuit(&Circuit::random(n, 3, true, &mut rng)).unwrap()
        };
        let dense = a.to_statevector().unwrap().inner(&b.to_statevector().unwrap()).unwrap().norm();
        let exact = overlap_exact(&a, &b).unwrap();
        worst = worst.max((exact.value() - dense).abs());
        if dense > 1e-9 {
            nonzero += 1;
            let s = -2.0 * dense.log2();
            let dyadic = (s - s.round()).abs() < 1e-6
                && (dense - 2f64.powf(-s.round() / 2.0)).abs() < 1e-9
                && matches!(exact, StabilizerOverlap::Dyadic { s: k } if k as f64 == s.round());
            if !dyadic {
                non_dyadic += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        2,
        "stabilizer overlap is 0 or 2^(-s/2)",
        worst < 1e-9 && non_dyadic == 0 && nonzero > 100 && within(elapsed, 60),
        format!("max error {worst:.1e}, {nonzero} nonzero, {non_dyadic} non-dyadic, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_03_graph_state_reduction() {
    let start = Instant::now();
    let mut pairs: Vec<(Graph, Graph)> = Vec::new();
    for n in 1..=4 {
        let all = Graph::all_graphs(n);
        for g in &all {
            for h in &all {
                pairs.push((g.clone(), h.clone()));
            }
        }
    }
    let mut rng = seeded(303);
    let s5 = PermGroup::symmetric(5).unwrap();
    for i in 0..200 {
        let g = Graph::random(5, 0.5, &mut rng);
        let h = if i % 2 == 0 { g.permuted(&s5.sample_uniform(&mut rng)).unwrap() } else { Graph::random(5, 0.5, &mut rng) };
        pairs.push((g, h));
    }
    let (mut disagreements, mut overlap_violations, mut iso_count) = (0, 0, 0);
    let mut worst_non_iso = 0.0f64;
    for (g, h) in &pairs {
        let label = decide_ssi(&reduce_gi_to_ssi(g, h).unwrap()).unwrap();
        let iso = graph_iso_bruteforce(g, h).unwrap().is_some();
        iso_count += iso as usize;
        if label.is_yes() != iso || !(label.is_yes() || label.is_no()) {
            disagreements += 1;
        }
        if !iso {
            let sq = label.value().powi(2);
            worst_non_iso = worst_non_iso.max(sq);
            if sq > 0.5 + 1e-12 {
                overlap_violations += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        3,
        "graph isomorphism through graph-state SSI",
        disagreements == 0 && overlap_violations == 0 && within(elapsed, 120),
        format!(
            "{} pairs ({iso_count} isomorphic), {disagreements} disagreements, max non-iso overlap² {worst_non_iso:.3}, {elapsed:.2?}",
            pairs.len()
        ),
    );
}

fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = p.compose(g).unwrap();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen
}

fn random_perm(degree: usize, rng: &mut SeededRng) -> Permutation {
    let mut images: Vec<usize> = (0..degree).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

#[test]
fn criterion_04_schreier_sims() {
    let mut rng = seeded(404);
    let (mut groups, mut order_bad, mut member_bad, mut chi_tested, mut chi_bad) = (0, 0, 0, 0, 0);
    let mut min_p = 1.0f64;
    while groups < 50 {
        let degree = rng.gen_range(2..=7);
        let gens: Vec<Permutation> = (0..rng.gen_range(1..=3)).map(|_| random_perm(degree, &mut rng)).collect();
        let reference = closure(degree, &gens);
        if reference.len() > 10_000 {
            continue;
        }
        groups += 1;
        let g = PermGroup::new(degree, gens).unwrap();
        if g.order_u64() != Some(reference.len() as u64) {
            order_bad += 1;
        }
        let probes: Vec<Permutation> =
            reference.iter().take(200).cloned().chain((0..200).map(|_| random_perm(degree, &mut rng))).collect();
        member_bad += probes.iter().filter(|p| g.contains(p).unwrap() != reference.contains(p)).count();
        if reference.len() <= 60 && reference.len() > 1 {
            chi_tested += 1;
            let mut elements: Vec<Permutation> = reference.iter().cloned().collect();
            elements.sort();
            let samples = 200 * elements.len();
            let mut counts = vec![0usize; elements.len()];
            for _ in 0..samples {
                counts[elements.binary_search(&g.sample_uniform(&mut rng)).unwrap()] += 1;
            }
            let expected = samples as f64 / elements.len() as f64;
            let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
            let p = 1.0 - ChiSquared::new((elements.len() - 1) as f64).unwrap().cdf(stat);
            min_p = min_p.min(p);
            if p < 1e-3 {
                chi_bad += 1;
            }
        }
    }
    report(
        4,
        "Schreier-Sims order, membership and sampling",
        order_bad == 0 && member_bad == 0 && chi_bad == 0 && chi_tested > 0,
        format!(
            "50 groups, {order_bad} order mismatches, {member_bad} membership mismatches, \
             chi-square on {chi_tested} groups with min p {min_p:.3}"
        ),
    );
}

/// Isomorphic pairs `(ψ, P_σψ)` over several groups, `n ≤ 4`, `|G| ≤ 24`.
fn isomorphic_instances(rng: &mut SeededRng) -> Vec<SIInstance> {
    let mut out = Vec::new();
    for n in 2..=4 {
        let mut groups = vec![PermGroup::symmetric(n).unwrap(), PermGroup::cyclic(n).unwrap()];
        if n == 4 {
            groups.push(PermGroup::new(4, vec![Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap()]).unwrap());
        }
        for g in groups {
            for clifford in [false, true] {
                let len = if clifford { 2 * n * n + 8 } else { 5 * n };
                let c0 = Circuit::random(n, len, clifford, rng);
                let c1 = relabel(&c0, &g.sample_uniform(rng));
                out.push(SIInstance::new(c0, c1, g.clone(), None).unwrap());
            }
        }
    }
    out
}

#[test]
fn criterion_05_no_case() {
    let mut rng = seeded(505);
    let instances = isomorphic_instances(&mut rng);
    let mut worst = 0.0f64;
    let mut checked = 0;
    for inst in &instances {
        for k in 1..=3 {
            if k * inst.n_qubits() <= 12 {
                worst = worst.max(no_case_indistinguishability(inst, k).unwrap());
                checked += 1;
            }
        }
    }
    let trials = 10_000;
    let mut cheat = Vec::new();
    for (i, inst) in instances.iter().enumerate().step_by(3) {
        let session = SniSession::new(inst, ProverModel::cheat().with_k(2), 1).unwrap();
        let (_, stats) = run_trials(trials, 5050 + i as u64, |r| session.round(r)).unwrap();
        cheat.push(stats.freq);
    }
    let cheat_ok = cheat.iter().all(|&f| five_sigma(f, 0.5, trials));
    report(
        5,
        "isomorphic twirls coincide and cheating gains nothing",
        worst <= 1e-10 && cheat_ok,
        format!(
            "{checked} (instance, k) pairs, max distance {worst:.1e}; cheating acceptance {:?}",
            cheat.iter().map(|f| format!("{f:.4}")).collect::<Vec<_>>()
        ),
    );
}

/// Non-isomorphic pairs inside the promise, with `ε` the true maximal overlap.
fn non_isomorphic_instances(rng: &mut SeededRng) -> Vec<SIInstance> {
    let s2 = PermGroup::symmetric(2).unwrap();
    let s3 = PermGroup::symmetric(3).unwrap();
    let mut out = vec![
        SIInstance::new(basis_circuit(3, &[2]), basis_circuit(3, &[1, 2]), s3.clone(), Some(0.5)).unwrap(),
        SIInstance::new(Circuit::empty(2).unwrap(), plus_circuit(2), s2.clone(), Some(0.5)).unwrap(),
        SIInstance::new(basis_circuit(2, &[1]), basis_circuit(2, &[0, 1]), s2.clone(), Some(0.25)).unwrap(),
    ];
    while out.len() < 6 {
        let c0 = Circuit::random(3, 15, false, rng);
        let c1 = Circuit::random(3, 15, false, rng);
        let probe = SIInstance::new(c0.clone(), c1.clone(), s3.clone(), Some(1.0)).unwrap();
        let eps = dense_max_overlap(&probe);
        if eps > 1e-6 && eps < 0.9 {
            out.push(SIInstance::new(c0, c1, s3.clone(), Some(eps + 1e-12)).unwrap());
        }
    }
    out
}

#[test]
fn criterion_06_yes_case() {
    let mut rng = seeded(606);
    let instances = non_isomorphic_instances(&mut rng);
    let trials = 10_000u64;
    let mut exact_rejects = 0;
    let mut hlm_ok = true;
    let mut hlm_freqs = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let exact = SniSession::new(inst, ProverModel::exact(), 1).unwrap();
        let (_, s) = run_trials(trials, 6000 + i as u64, |r| exact.round(r)).unwrap();
        exact_rejects += s.trials - s.accepts;
        let hlm = SniSession::new(inst, ProverModel::hlm(2.0 / 3.0), 1).unwrap();
        let (_, s) = run_trials(trials, 6100 + i as u64, |r| hlm.round(r)).unwrap();
        hlm_ok &= s.freq >= 2.0 / 3.0 - s.ci95;
        hlm_freqs.push(format!("{:.4}", s.freq));
    }
    let mut amplified = Vec::new();
    let mut curve_ok = true;
    for r in [1usize, 5, 15, 45] {
        let session = SniSession::new(&instances[0], ProverModel::hlm(2.0 / 3.0), r).unwrap();
        let (_, s) = run_trials(trials, 6200 + r as u64, |g| session.round(g)).unwrap();
        curve_ok &= s.freq >= 1.0 - (-(r as f64) / 18.0).exp() - s.ci95;
        amplified.push(s.freq);
    }
    let increasing = amplified.windows(2).all(|w| w[1] > w[0]);
    report(
        6,
        "completeness of the exact, stochastic and amplified provers",
        exact_rejects == 0 && hlm_ok && curve_ok && increasing,
        format!(
            "exact rejections {exact_rejects}, stochastic {hlm_freqs:?}, amplified r=1,5,15,45 {:?}",
            amplified.iter().map(|f| format!("{f:.4}")).collect::<Vec<_>>()
        ),
    );
}

#[test]
fn criterion_07_zero_knowledge_view() {
    let mut rng = seeded(707);
    let s2 = PermGroup::symmetric(2).unwrap();
    let yes = vec![
        SIInstance::new(Circuit::empty(2).unwrap(), plus_circuit(2), s2.clone(), Some(0.5)).unwrap(),
        SIInstance::new(basis_circuit(2, &[1]), basis_circuit(2, &[0, 1]), s2.clone(), Some(0.25)).unwrap(),
        SIInstance::new(Circuit::empty(2).unwrap(), basis_circuit(2, &[0, 1]), s2.clone(), Some(0.25)).unwrap(),
    ];
    let mut all: Vec<SIInstance> = yes.clone();
    all.extend(isomorphic_instances(&mut rng).into_iter().filter(|i| i.n_qubits() == 2));
    let stage1 = all
        .iter()
        .map(|i| zk_view_distance(i, ZkStage::AfterFirstMessage, 2, ProverModel::exact()).unwrap())
        .fold(0.0, f64::max);
    let final_exact =
        yes.iter().map(|i| zk_view_distance(i, ZkStage::Final, 2, ProverModel::exact()).unwrap()).fold(0.0, f64::max);
    let final_hlm = zk_view_distance(&yes[0], ZkStage::Final, 2, ProverModel::hlm(2.0 / 3.0)).unwrap();
    report(
        7,
        "verifier view matches the simulator",
        stage1 <= 1e-10 && final_exact <= 1e-10 && final_hlm <= 1.0 / 3.0 + 1e-12,
        format!(
            "{} instances, stage-1 max {stage1:.1e}, final (exact) max {final_exact:.1e}, final (stochastic) {final_hlm:.4}",
            all.len()
        ),
    );
}

#[test]
fn criterion_08_set_dichotomy_and_gs() {
    let mut rng = seeded(808);
    let groups = vec![
        PermGroup::symmetric(2).unwrap(),
        PermGroup::symmetric(3).unwrap(),
        PermGroup::cyclic(3).unwrap(),
        PermGroup::new(3, vec![Permutation::transposition(3, 0, 2)]).unwrap(),
    ];
    let (mut size_bad, mut tested) = (0, 0);
    let mut gs_iso = Vec::new();
    let mut gs_non = Vec::new();
    for g in &groups {
        let n = g.degree();
        let order = g.order_u64().unwrap() as usize;
        let (mut ran_iso, mut ran_non) = (0, 0);
        for trial in 0..12 {
            let c0 = Circuit::random(n, 2 * n * n + 8, true, &mut rng);
            let c1 = if trial % 2 == 0 { relabel(&c0, &g.sample_uniform(&mut rng)) } else { Circuit::random(n, 2 * n * n + 8, true, &mut rng) };
            let inst = SSIInstance::new(c0, c1, g.clone(), Some(std::f64::consts::FRAC_1_SQRT_2)).unwrap();
            let iso = dense_max_overlap(inst.as_si()) > 1.0 - 1e-9;
            let set = build_s_g(&inst).unwrap();
            tested += 1;
            if set.len() != if iso { order } else { 2 * order } {
                size_bad += 1;
            }
            let (bucket, ran) = if iso { (&mut gs_iso, &mut ran_iso) } else { (&mut gs_non, &mut ran_non) };
            if *ran < 2 {
                *ran += 1;
                let params = GSParams::for_group_order(order as u64).unwrap();
                let seed = 8000 + tested as u64;
                let (_, s) = run_trials(1000, seed, |r| gs_protocol_with_set(&inst, &set, &params, r)).unwrap();
                bucket.push(s.freq);
            }
        }
    }
    let gs_ok = gs_iso.iter().all(|&f| f <= 1.0 / 3.0) && gs_non.iter().all(|&f| f >= 2.0 / 3.0);
    report(
        8,
        "|S_G| is |G| or 2|G| and the set lower bound protocol separates",
        size_bad == 0 && gs_ok && gs_iso.len() == 2 * groups.len() && gs_non.len() == 2 * groups.len(),
        format!("{tested} instances, {size_bad} size mismatches, acceptance iso {gs_iso:?}, non-iso {gs_non:?}"),
    );
}

/// A circuit in `Q_{2n,n}` whose output is exactly a product: every output
/// qubit is entangled only with its own discarded partner.
fn product_circuit(n: usize, rng: &mut SeededRng) -> Circuit {
    let mut gates = Vec::new();
    for q in 0..n {
        for _ in 0..4 {
            gates.push(match rng.gen_range(0..3) {
                0 => Gate::H(q),
                1 => Gate::S(q),
                _ => Gate::T(q),
            });
        }
        if rng.gen_bool(0.7) {
            gates.push(Gate::Cnot { control: q, target: n + q });
        }
        gates.push(Gate::H(q));
        gates.push(Gate::T(q));
    }
    Circuit::new(2 * n, n, gates).unwrap()
}

fn random_qubit_state(rng: &mut SeededRng) -> DensityMatrix {
    DensityMatrix::reduced_from_pure(&PureState::random(2, rng).unwrap(), &[0]).unwrap()
}

#[test]
fn criterion_09_msi_reduction() {
    let mut rng = seeded(909);
    let (mut product_bad, mut wiring_checked, mut worst_product) = (0, 0, 0.0f64);
    for n in 1..=4 {
        for _ in 0..5 {
            let q = product_circuit(n, &mut rng);
            let inst = reduce_productstate_to_msi(&q).unwrap();
            let (rho, marg) = inst.densities().unwrap();
            let d = trace_distance(&rho, &marg).unwrap();
            worst_product = worst_product.max(d);
            if n <= 2 {
                let wired = marginal_product_circuit(&q).unwrap().run_mixed().unwrap();
                worst_product = worst_product.max(trace_distance(&wired, &marg).unwrap());
                wiring_checked += 1;
            }
            if d > 1e-10 || !decide_msi(&inst).unwrap().is_yes() {
                product_bad += 1;
            }
        }
    }
    let (mut gutoski_bad, mut perturbed) = (0, 0);
    for n in 1..=4 {
        for t in [0.01, 0.05, 0.1, 0.3, 0.7] {
            let factors: Vec<DensityMatrix> = (0..n).map(|_| random_qubit_state(&mut rng)).collect();
            let product = DensityMatrix::tensor_all(&factors).unwrap();
            let noise = DensityMatrix::from_pure(&PureState::random(n, &mut rng).unwrap()).unwrap();
            let rho = DensityMatrix::mix(&[(1.0 - t, product), (t, noise)]).unwrap();
            let r = check_gutoski_bound(&rho, &factors).unwrap();
            let alpha = r.witness_distance;
            let d = trace_distance(&rho, &rho.product_of_marginals().unwrap()).unwrap();
            let bound_ok = d <= (n as f64 + 1.0) * alpha / 2.0 + 1e-9;
            let norm_ok = 2.0 * d <= (n as f64 + 1.0) * alpha + 1e-9 && r.holds;
            perturbed += 1;
            if !(bound_ok && norm_ok) {
                gutoski_bad += 1;
            }
        }
        // A circuit-level perturbation: an entangling gate across outputs.
        if n >= 2 {
            let q = product_circuit(n, &mut rng);
            let mut gates = q.gates().to_vec();
            gates.push(Gate::H(0));
            gates.push(Gate::Cz { control: 0, target: 1 });
            let rho = Circuit::new(2 * n, n, gates).unwrap().run_mixed().unwrap();
            let clean = q.run_mixed().unwrap();
            let factors: Vec<DensityMatrix> = (0..n).map(|i| clean.marginal(i).unwrap()).collect();
            let r = check_gutoski_bound(&rho, &factors).unwrap();
            let d = trace_distance(&rho, &rho.product_of_marginals().unwrap()).unwrap();
            perturbed += 1;
            if !(r.holds && d <= (n as f64 + 1.0) * r.witness_distance / 2.0 + 1e-9) {
                gutoski_bad += 1;
            }
        }
    }
    report(
        9,
        "product-state reduction and the marginal bound",
        product_bad == 0 && gutoski_bad == 0,
        format!(
            "20 product inputs (max distance {worst_product:.1e}, {wiring_checked} wired literally), \
             {perturbed} perturbed inputs, {gutoski_bad} bound failures"
        ),
    );
}

#[test]
fn criterion_10_relaxed_bound() {
    let mut rng = seeded(1010);
    let (mut count, mut bad, mut dense_checked) = (0, 0, 0);
    let mut tightest = f64::INFINITY;
    while count < 50 {
        let n = 2 + count % 2;
        let group = if count % 3 == 0 { PermGroup::cyclic(n).unwrap() } else { PermGroup::symmetric(n).unwrap() };
        let c0 = Circuit::random(n, 5 * n, false, &mut rng);
        let mut c1 = relabel(&c0, &group.sample_uniform(&mut rng));
        let q = rng.gen_range(0..n);
        for g in [Gate::H(q), Gate::T(q), Gate::H(q)] {
            c1.push(g).unwrap();
        }
        let probe = SIInstance::new(c0.clone(), c1.clone(), group.clone(), Some(1.0)).unwrap();
        let eps = dense_max_overlap(&probe);
        if !(eps > 0.05 && eps < 1.0 - 1e-9) {
            continue;
        }
        let inst = SIInstance::new(c0, c1, group, Some(eps)).unwrap();
        let k = 1 + count % 3;
        if k * n > 12 {
            continue;
        }
        count += 1;
        let r = relaxed_check(&inst, k).unwrap();
        let bound = relaxed_bound(eps, k);
        if !(r.holds && r.trace_norm <= bound + 1e-9) {
            bad += 1;
        }
        tightest = tightest.min(bound - r.trace_norm);
        if k * n <= 6 {
            let (a, b) = inst.states().unwrap();
            let rho0 = group_twirl_mixture(&a, inst.group(), k, u64::MAX).unwrap().to_density().unwrap();
            let rho1 = group_twirl_mixture(&b, inst.group(), k, u64::MAX).unwrap().to_density().unwrap();
            if (2.0 * trace_distance(&rho0, &rho1).unwrap() - r.trace_norm).abs() > 1e-9 {
                bad += 1;
            }
            dense_checked += 1;
        }
    }
    report(
        10,
        "relaxed-promise trace-norm bound",
        bad == 0,
        format!("50 instances ({dense_checked} cross-checked densely), {bad} violations, min slack {tightest:.3e}"),
    );
}
