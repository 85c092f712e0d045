use num_rational::BigRational;

use super::*;
use crate::graph::{EdgeSign, MatrixWeightedSignedGraph};
use crate::linalg::{ExactBackend, FloatBackend, Scalar};
use crate::partition::Partition;
use crate::system::{
    assemble_fixed, assemble_heterogeneous, assemble_network, Dynamics, HeterogeneousDynamics,
    Network, SwitchingFamily, UnionAFactor,
};

type Q = Mat<BigRational>;
type G = MatrixWeightedSignedGraph<BigRational>;

const EX: ExactBackend = ExactBackend;

fn w() -> Q {
    Q::from_i64(&[[1, 2], [2, 1]])
}

fn v() -> Q {
    Q::from_i64(&[[2, 1], [1, 2]])
}

fn q(n: i64) -> BigRational {
    BigRational::from_i64(n)
}

fn dyn1() -> Dynamics<BigRational> {
    let i = Q::identity(2);
    Dynamics::new(i.clone(), i.scale(&q(2)), i.clone(), i.scale(&q(2))).unwrap()
}

fn graph(n: usize, d: usize, leaders: &[usize], edges: &[(usize, usize, EdgeSign, Q)]) -> G {
    let mut g = G::new(n, d, leaders.to_vec()).unwrap();
    for (i, j, s, m) in edges {
        g.add_edge(*i, *j, *s, m.clone()).unwrap();
    }
    g
}

use EdgeSign::{Negative as Neg, Positive as Pos};

fn example1() -> G {
    graph(
        4,
        2,
        &[0],
        &[
            (0, 1, Pos, w()),
            (0, 2, Pos, w()),
            (1, 3, Neg, v()),
            (2, 3, Neg, v()),
        ],
    )
}

fn example1_override() -> Q {
    let (w, v, z) = (w(), v(), Q::zeros(2, 2));
    let rows: [[Q; 4]; 4] = [
        [&w + &w, -&w, -&w, z.clone()],
        [-&w, &w - &v, z.clone(), -&v],
        [-&w, z.clone(), &w - &v, -&v],
        [z.clone(), -&v, -&v, &(-&v) - &v],
    ];
    let mut l = Q::zeros(8, 8);
    for (r, row) in rows.iter().enumerate() {
        for (c, b) in row.iter().enumerate() {
            l.set_block(2 * r, 2 * c, b);
        }
    }
    l
}

fn path3() -> G {
    let one = Q::from_i64(&[[1]]);
    graph(3, 1, &[0], &[(0, 1, Pos, one.clone()), (1, 2, Pos, one)])
}

fn kalman_rank(sys: &crate::system::AugmentedSystem<BigRational>) -> usize {
    EX.rank(&kalman_matrix(sys))
}

/// Rank of `[M, L_a M, L_b M, L_a L_b M, …]` over all words up to length `dn`.
fn switched_oracle(ls: &[Q], m: &Q) -> usize {
    let dn = m.rows();
    let mut layer = vec![m.clone()];
    let mut all = vec![m.clone()];
    for _ in 0..dn {
        let next: Vec<Q> = layer
            .iter()
            .flat_map(|x| ls.iter().map(move |l| l * x))
            .collect();
        all.extend(next.iter().cloned());
        let refs: Vec<&Q> = all.iter().collect();
        let basis = EX.column_space(&Q::hstack(&refs));
        all = vec![basis.to_matrix()];
        layer = vec![basis.to_matrix()];
    }
    all[0].cols()
}

#[test]
fn ctrb_example1_declared_signs() {
    let sys = assemble_fixed(&example1(), &dyn1()).unwrap();
    let v = ctrb(&EX, &sys).unwrap();
    assert_eq!((v.subspace_dim, v.ambient_dim), (6, 8));
    assert!(!v.controllable);
    assert_eq!(kalman_rank(&sys), 6);
}

#[test]
fn ctrb_example1_override_laplacian() {
    let net = Network::with_override(example1(), example1_override()).unwrap();
    let sys = assemble_network(&net, &dyn1()).unwrap();
    assert_eq!(ctrb(&EX, &sys).unwrap().subspace_dim, 6);
    assert_eq!(kalman_rank(&sys), 6);
}

#[test]
fn ctrb_all_leaders_edgeless() {
    let g = G::new(3, 2, vec![0, 1, 2]).unwrap();
    let v = ctrb(&EX, &assemble_fixed(&g, &Dynamics::first_order(2)).unwrap()).unwrap();
    assert!(v.controllable);
    assert_eq!(v.subspace_dim, 6);
}

#[test]
fn ctrb_scalar_path() {
    let sys = assemble_fixed(&path3(), &Dynamics::first_order(1)).unwrap();
    // [e1, −L e1, L² e1] = [[1,-1,2],[0,1,-3],[0,0,1]]
    let k = kalman_matrix(&sys);
    assert_eq!(k, Q::from_i64(&[[1, -1, 2], [0, 1, -3], [0, 0, 1]]));
    assert!(ctrb(&EX, &sys).unwrap().controllable);
}

#[test]
fn ctrb_float_agrees_on_example1() {
    let g = example1().map_scalar(|x| x.to_f64());
    let sys = assemble_fixed(&g, &dyn1().map_scalar(|x| x.to_f64())).unwrap();
    assert_eq!(
        ctrb(&FloatBackend::default(), &sys).unwrap().subspace_dim,
        6
    );
}

#[test]
fn certificate_with_complete_input() {
    let a = Q::from_i64(&[[1, 3], [0, 2]]);
    let c = Q::from_i64(&[[2, 1], [0, 1]]);
    let dynamics = Dynamics::new(a.clone(), Q::identity(2), Q::identity(2), c.clone()).unwrap();
    let pi = Partition::parse("1|2,3|4", 4).unwrap();
    let cert = q_certificate(
        &EX,
        &Network::new(example1()),
        &pi,
        &dynamics,
        CertificateVariant::Fixed,
    )
    .unwrap();
    assert!(cert.exists);
    assert_eq!(&c * &cert.q1_blocks[0], &a * &c);
    assert_eq!(cert.qij_blocks.len(), 3);
}

#[test]
fn certificate_first_order_is_quotient() {
    let g = example1();
    let pi = Partition::parse("1|2,3|4", 4).unwrap();
    let cert = q_certificate(
        &EX,
        &Network::new(g.clone()),
        &pi,
        &Dynamics::first_order(2),
        CertificateVariant::Fixed,
    )
    .unwrap();
    assert!(cert.exists);
    assert!(cert.q1_blocks[0].is_zero());
    let lq = crate::partition::quotient_laplacian(&EX, &g, &pi).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(cert.qij_blocks[i][j], lq.block(2 * i, 2 * j, 2, 2));
        }
    }
    assert_eq!(cert.q.unwrap(), -&lq);
}

#[test]
fn certificate_missing_when_ac_leaves_im_c() {
    let dynamics = Dynamics::new(
        Q::from_i64(&[[0, 1], [0, 0]]),
        Q::identity(2),
        Q::identity(2),
        Q::from_i64(&[[1], [1]]),
    )
    .unwrap();
    let g = G::new(2, 2, vec![0]).unwrap();
    let cert = q_certificate(
        &EX,
        &Network::new(g),
        &Partition::singletons(2),
        &dynamics,
        CertificateVariant::Fixed,
    )
    .unwrap();
    assert!(!cert.exists);
    assert_eq!(cert.failing_equation.as_deref(), Some("A·C = C·Q1"));
}

#[test]
fn certificate_rejects_non_equitable_partitions() {
    let pi = Partition::parse("1|2,4|3", 4).unwrap();
    let err = q_certificate(
        &EX,
        &Network::new(example1()),
        &pi,
        &dyn1(),
        CertificateVariant::Fixed,
    );
    assert!(matches!(err, Err(crate::Error::Precondition(_))));
}

#[test]
fn dual_certificate_verifies_transposed_identity() {
    let dynamics = Dynamics::new(
        Q::from_i64(&[[1, 1], [0, 1]]),
        Q::from_i64(&[[1, 0], [1, 1]]),
        Q::identity(2),
        Q::identity(2),
    )
    .unwrap();
    let pi = Partition::parse("1|2,3|4", 4).unwrap();
    let cert = q_certificate(
        &EX,
        &Network::new(example1()),
        &pi,
        &dynamics,
        CertificateVariant::Dual,
    )
    .unwrap();
    assert!(cert.exists);
    assert_eq!(cert.q1_blocks[0], dynamics.a.transpose());
}

#[test]
fn leader_bound_example1() {
    let pi = Partition::parse("1|2,3|4", 4).unwrap();
    let r = theorem1_bound(&EX, &Network::new(example1()), &dyn1(), Some(&pi)).unwrap();
    assert_eq!((r.bound, r.achieved_dim), (6, 6));
    assert!(r.tight && r.applicable && r.contained && !r.violated);
    assert!(r.uncontrollable_by_partition);
    assert!(r.complete_control_input);

    let default = theorem1_bound(&EX, &Network::new(example1()), &dyn1(), None).unwrap();
    assert_eq!(default.partition_used, pi);
}

#[test]
fn leader_bound_with_laplacian_override() {
    let net = Network::with_override(example1(), example1_override()).unwrap();
    let r = theorem1_bound(&EX, &net, &dyn1(), None).unwrap();
    assert_eq!((r.bound, r.achieved_dim), (6, 6));
    assert!(r.contained);
}

#[test]
fn leader_bound_all_singletons_is_vacuous() {
    let r = theorem1_bound(
        &EX,
        &Network::new(example1()),
        &dyn1(),
        Some(&Partition::singletons(4)),
    )
    .unwrap();
    assert_eq!(r.bound, 8);
    assert!(!r.uncontrollable_by_partition);
}

#[test]
fn leader_bound_leader_in_shared_cell_is_not_applicable() {
    let g = graph(
        3,
        1,
        &[0],
        &[
            (0, 1, Pos, Q::from_i64(&[[1]])),
            (1, 2, Pos, Q::from_i64(&[[1]])),
        ],
    );
    let pi = Partition::parse("1,3|2", 3).unwrap();
    let r = theorem1_bound(&EX, &Network::new(g), &Dynamics::first_order(1), Some(&pi)).unwrap();
    assert!(!r.leaders_isolated && !r.applicable);
}

fn example3_dynamics() -> HeterogeneousDynamics<BigRational> {
    let i = Q::identity(2);
    HeterogeneousDynamics::new(
        vec![
            (i.clone(), i.scale(&q(2))),
            (v(), i.scale(&q(2))),
            (v(), i.scale(&q(2))),
            (w(), i.scale(&q(2))),
        ],
        i.clone(),
        i.scale(&q(2)),
    )
    .unwrap()
}

#[test]
fn heterogeneous_example3() {
    let g = graph(
        4,
        2,
        &[0],
        &[
            (0, 1, Pos, w()),
            (0, 2, Pos, w()),
            (1, 3, Pos, w()),
            (2, 3, Pos, w()),
        ],
    );
    let net = Network::new(g);
    let hetero = example3_dynamics();
    let sys = assemble_heterogeneous(&net, &hetero).unwrap();
    assert_eq!(ctrb(&EX, &sys).unwrap().subspace_dim, 6);
    assert_eq!(kalman_rank(&sys), 6);
    let r = theorem3_bound(&EX, &net, &hetero, None).unwrap();
    assert_eq!(r.partition_used, Partition::parse("1|2,3|4", 4).unwrap());
    assert!(r.certificate.exists && r.contained && r.uncontrollable_by_partition);
}

#[test]
fn heterogeneous_init_separates_dynamics() {
    let g = G::new(4, 2, vec![0]).unwrap();
    let init = heterogeneous_init(&EX, &g, &example3_dynamics());
    assert_eq!(init, Partition::parse("1|2,3|4", 4).unwrap());
}

#[test]
fn heterogeneous_certificate_requires_cell_homogeneity() {
    let g = graph(
        4,
        2,
        &[0],
        &[(0, 1, Pos, w()), (0, 2, Pos, w()), (0, 3, Pos, w())],
    );
    let pi = Partition::parse("1|2,3,4", 4).unwrap();
    let err = q_certificate_heterogeneous(&EX, &Network::new(g), &pi, &example3_dynamics());
    assert!(matches!(err, Err(crate::Error::Precondition(_))));
}

fn example2_family() -> (Vec<G>, Dynamics<BigRational>) {
    let a = graph(
        4,
        2,
        &[0],
        &[(0, 1, Pos, w()), (0, 2, Pos, w()), (0, 3, Pos, w())],
    );
    let b = graph(4, 2, &[0], &[(0, 1, Pos, w()), (0, 3, Pos, w())]);
    (vec![a, b], dyn1())
}

#[test]
fn switching_single_member_matches_ctrb() {
    let g = example1();
    let fam = SwitchingFamily::assemble(std::slice::from_ref(&g), &dyn1()).unwrap();
    let single = ctrb(&EX, &assemble_fixed(&g, &dyn1()).unwrap()).unwrap();
    assert_eq!(
        switching_ctrb(&EX, &fam).unwrap().subspace_dim,
        single.subspace_dim
    );
}

#[test]
fn switching_matches_word_oracle() {
    let (gs, dynamics) = example2_family();
    let fam = SwitchingFamily::assemble(&gs, &dynamics).unwrap();
    let ls: Vec<Q> = fam.members.iter().map(|m| m.l_tilde.clone()).collect();
    let oracle = switched_oracle(&ls, &fam.members[0].m_tilde);
    assert_eq!(switching_ctrb(&EX, &fam).unwrap().subspace_dim, oracle);
}

#[test]
fn switching_example4_controllable() {
    let a = graph(3, 2, &[0], &[(0, 1, Pos, w())]);
    let b = graph(3, 2, &[0], &[(0, 2, Pos, w())]);
    let fam = SwitchingFamily::assemble(&[a, b], &dyn1()).unwrap();
    let v = switching_ctrb(&EX, &fam).unwrap();
    assert_eq!(v.subspace_dim, 6);
    assert!(v.controllable);
}

#[test]
fn join_bound_member_partitions() {
    let (gs, dynamics) = example2_family();
    let fam = SwitchingFamily::assemble(&gs, &dynamics).unwrap();
    let r = theorem2_bound(&EX, &fam, &dynamics, None).unwrap();
    assert_eq!(
        r.member_partitions[0],
        Partition::parse("1|2,3,4", 4).unwrap()
    );
    assert_eq!(
        r.member_partitions[1],
        Partition::parse("1|2,4|3", 4).unwrap()
    );
    assert_eq!(r.join, Partition::parse("1|2,3,4", 4).unwrap());
    assert_eq!(r.bound, 4);
    assert!(r.applicable);
    assert!(r.common_applicable && r.common_contained);
    assert!(r.achieved_dim <= r.common_bound);
}

#[test]
fn join_bound_single_graph_singletons() {
    let g = example1();
    let fam = SwitchingFamily::assemble(std::slice::from_ref(&g), &dyn1()).unwrap();
    let r = theorem2_bound(&EX, &fam, &dyn1(), Some(&[Partition::singletons(4)])).unwrap();
    assert_eq!(r.bound, 8);
    assert!(!r.violated);
}

#[test]
fn join_bound_symmetric_three_nodes() {
    let one = Q::from_i64(&[[1]]);
    let a = graph(
        3,
        1,
        &[0],
        &[(0, 1, Pos, one.clone()), (0, 2, Pos, one.clone())],
    );
    let b = graph(3, 1, &[0], &[(1, 2, Pos, one)]);
    let dynamics = Dynamics::first_order(1);
    let fam = SwitchingFamily::assemble(&[a, b], &dynamics).unwrap();
    let r = theorem2_bound(&EX, &fam, &dynamics, None).unwrap();
    assert_eq!(r.join, Partition::parse("1|2,3", 3).unwrap());
    assert_eq!(r.bound, 2);
    assert!(r.achieved_dim <= 2 && !r.violated);
}

#[test]
fn union_example4_is_indeterminate() {
    let a = graph(3, 2, &[0], &[(0, 1, Pos, w())]);
    let b = graph(3, 2, &[0], &[(0, 2, Pos, w())]);
    for factor in [UnionAFactor::MemberCount, UnionAFactor::One] {
        let r = union_analysis(&EX, &[a.clone(), b.clone()], &dyn1(), factor).unwrap();
        assert!(!r.union_verdict.controllable);
        assert!(r.switched_verdict.controllable);
        assert!(r.indeterminate);
        assert_eq!(r.union_implies_switched, TheoremStatus::NotApplicable);
    }
}

#[test]
fn union_example5_nontrivial_member_cell() {
    let a = graph(3, 2, &[0], &[(0, 1, Pos, w()), (0, 2, Pos, w())]);
    let b = graph(3, 2, &[0], &[(1, 2, Pos, w())]);
    let r = union_analysis(&EX, &[a, b], &dyn1(), UnionAFactor::MemberCount).unwrap();
    assert_eq!(
        r.member_partitions[0],
        Partition::parse("1|2,3", 3).unwrap()
    );
    assert_eq!(r.switched_verdict.subspace_dim, 4);
    assert!(!r.union_verdict.controllable);
    assert_eq!(r.nontrivial_member_cell, TheoremStatus::Holds);
    assert!(!r.indeterminate);
}

#[test]
fn union_all_leaders_edgeless() {
    let g = G::new(2, 1, vec![0, 1]).unwrap();
    let r = union_analysis(
        &EX,
        &[g],
        &Dynamics::first_order(1),
        UnionAFactor::MemberCount,
    )
    .unwrap();
    assert!(r.union_verdict.controllable && r.switched_verdict.controllable);
    assert_eq!(r.union_implies_switched, TheoremStatus::Holds);
}

#[test]
fn observability_example6() {
    let g = graph(
        4,
        2,
        &[0],
        &[
            (0, 1, Pos, w()),
            (0, 2, Pos, w()),
            (1, 3, Pos, w()),
            (2, 3, Pos, w()),
        ],
    );
    let r = observability(&EX, &Network::new(g), &dyn1(), None).unwrap();
    assert_eq!(r.dual.subspace_dim, 6);
    assert!(!r.observable);
    assert_eq!(r.nontrivial_cell_unobservable, TheoremStatus::Holds);
    assert!(r.first_order_joint.is_none());
}

#[test]
fn observability_all_outputs() {
    let g = graph(2, 2, &[0, 1], &[(0, 1, Neg, v())]);
    let r = observability(&EX, &Network::new(g), &dyn1(), None).unwrap();
    assert!(r.observable);
}

#[test]
fn observability_scalar_path_first_order() {
    let r = observability(&EX, &Network::new(path3()), &Dynamics::first_order(1), None).unwrap();
    assert!(r.observable);
    let joint = r.first_order_joint.unwrap();
    assert!(joint.controllable && joint.observable);
    assert_eq!(joint.status, TheoremStatus::NotApplicable);
}

#[test]
fn observability_first_order_star_joint_verdict() {
    let one = Q::from_i64(&[[1]]);
    let g = graph(3, 1, &[0], &[(0, 1, Pos, one.clone()), (0, 2, Pos, one)]);
    let r = observability(&EX, &Network::new(g), &Dynamics::first_order(1), None).unwrap();
    let joint = r.first_order_joint.unwrap();
    assert_eq!(joint.status, TheoremStatus::Holds);
    assert!(!joint.controllable && !joint.observable);
}

#[test]
fn observability_invariant_under_double_dual() {
    let sys = assemble_heterogeneous(
        &Network::new(example1()),
        &HeterogeneousDynamics::from_homogeneous(&dyn1(), 4),
    )
    .unwrap();
    let once = observability_of(&EX, &sys).unwrap();
    let twice =
        observability_of(&EX, &crate::system::dualize(&crate::system::dualize(&sys))).unwrap();
    assert_eq!(once.subspace_dim, twice.subspace_dim);
}
