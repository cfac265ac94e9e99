//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use isoflow::catalog::{four_block_dual_setup, four_block_pair};
use isoflow_core::commutant::{commutant_of_partial_isometries, doubly_commutant_of_mz, StructureVerdict};
use isoflow_core::decompose::{bcl_check, fourfold_decompose, product_unitary_part, wold_cooper};
use isoflow_core::duality::{
    cnu_unitary_setup, double_dual_check, dual_fourfold, dual_pair, l_region_setup, minimal_extension,
    quadrant_setup, unitary_cnu_setup, unitary_unitary_setup, ExtensionSetup,
};
use isoflow_core::numlin::{max_principal_angle, Matrix, Subspace, Tolerances};
use isoflow_core::semigroups::{
    bishift_families, bishift_pair, check_semigroup_law, circulant_family, halfline_family, halfline_shift,
    modified_bishift_families, partial_isometry_pair, phi_family, phi_multiplier, DirectSumKernel, SemigroupFamily,
    WindowedMap,
};
use isoflow_core::spaces::{w_unitary, CellGrid1D, HardyCoeffSpace, LRegionIndex, QuadrantGrid2D};
use isoflow_core::IndexSet;

const RESID_TOL: f64 = 1e-10;
const ANGLE_TOL: f64 = 1e-8;
const RUNTIME_LIMIT: Duration = Duration::from_secs(1);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < RUNTIME_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("{detail}; {} ms", took.as_millis()))
}

fn core<T>(r: isoflow_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Row holding the single unit entry of column `j`, if the column is one.
fn unit_row(m: &Matrix, j: usize) -> Option<usize> {
    let mut found = None;
    for i in 0..m.rows() {
        let z = m.get(i, j);
        if z.re == 1.0 && z.im == 0.0 && found.is_none() {
            found = Some(i);
        } else if z.re != 0.0 || z.im != 0.0 {
            return None;
        }
    }
    found
}

/// Exact rank of an integer matrix by fraction-free elimination.
fn integer_rank(mut a: Vec<Vec<i128>>) -> usize {
    a.retain(|row| row.iter().any(|&x| x != 0));
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let (mut rank, mut prev) = (0usize, 1i128);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for k in c + 1..cols {
                let num = a[rank][c] * a[i][k] - a[i][c] * a[rank][k];
                assert_eq!(num % prev, 0, "fraction-free step must divide exactly");
                a[i][k] = num / prev;
            }
            a[i][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Equations `(B·op − op·B)[i, j] = 0` over `rows × cols`, in the unknowns
/// `B[a, b]` at position `a·n + b`.
fn commutator_rows(op: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> Vec<Vec<i128>> {
    let n = op.len();
    let mut out = Vec::new();
    for &i in rows {
        for &j in cols {
            let mut eq = vec![0i128; n * n];
            for k in 0..n {
                eq[i * n + k] += op[k][j];
                eq[k * n + j] -= op[i][k];
            }
            out.push(eq);
        }
    }
    out
}

fn integer_matrix(m: &Matrix) -> Vec<Vec<i128>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let z = m.get(i, j);
                    assert!(z.im == 0.0 && z.re.fract() == 0.0, "entry must be an integer");
                    z.re as i128
                })
                .collect()
        })
        .collect()
}

fn bcl_identification() -> Outcome {
    timed(|| {
        let mut checked = 0;
        for r in [1, 2] {
            let (extent, m) = (4, 4);
            let grid = CellGrid1D::new(m, extent, r).unwrap();
            let hardy = HardyCoeffSpace::new(extent - 1, m, r).unwrap();
            let w = w_unitary(extent, m, r).unwrap();
            let mut j = 0;
            loop {
                let phi = core(phi_multiplier(&hardy, j))?;
                if phi.faithful().is_empty() {
                    break;
                }
                let conj = core(core(halfline_shift(&grid, j))?.conjugate(&w))?;
                // Cell k of fibre rho sits at k·r + rho on both sides and moves to cell k + j.
                for col in phi.faithful().iter() {
                    let expected = col + j * r;
                    ensure(unit_row(phi.matrix(), col) == Some(expected), || {
                        format!("multiplier column {col} at step {j}, r={r}")
                    })?;
                    ensure(conj.faithful().contains(col) && unit_row(conj.matrix(), col) == Some(expected), || {
                        format!("shift column {col} at step {j}, r={r}")
                    })?;
                }
                let report = core(bcl_check(extent, m, r, &[j]))?;
                ensure(report.passed() && report.max_residual() == 0.0, || format!("step {j}, r={r}"))?;
                checked += 1;
                j += 1;
            }
        }
        Ok(format!("{checked} grid times, residual 0"))
    })
}

fn partial_isometry_resolutions() -> Outcome {
    timed(|| {
        let mut cases = 0;
        for m in 1..=16 {
            for r in [1, 2] {
                let id = Matrix::identity(m * r);
                for j in 0..m {
                    let (e0, e1) = core(partial_isometry_pair(m, j, r))?;
                    let range = core(core(e0.try_mul(&e0.adjoint()))?.try_add(&core(e1.try_mul(&e1.adjoint()))?))?;
                    let domain = core(core(e0.adjoint().try_mul(&e0))?.try_add(&core(e1.adjoint().try_mul(&e1))?))?;
                    ensure(range == id && domain == id, || format!("m={m}, j={j}, r={r}"))?;
                    // The two pieces move disjoint columns onto disjoint rows, covering everything.
                    let mut cols = BTreeSet::new();
                    let mut rows = BTreeSet::new();
                    for e in [&e0, &e1] {
                        for c in 0..m * r {
                            if let Some(row) = unit_row(e, c) {
                                ensure(cols.insert(c) && rows.insert(row), || format!("overlap m={m}, j={j}"))?;
                            }
                        }
                    }
                    ensure(cols.len() == m * r && rows.len() == m * r, || format!("gap m={m}, j={j}"))?;
                    cases += 1;
                }
            }
        }
        Ok(format!("{cases} (m, j, r) cases exact"))
    })
}

/// `⋂_{k=1..K} ran Vᵏ` for a partial map on coordinates, by iteration.
fn range_intersection(map: &[Option<usize>], k_max: usize) -> BTreeSet<usize> {
    let mut all: Option<BTreeSet<usize>> = None;
    for k in 1..=k_max {
        let range: BTreeSet<usize> = (0..map.len())
            .filter_map(|start| (0..k).try_fold(start, |i, _| map[i]))
            .collect();
        all = Some(match all {
            None => range,
            Some(prev) => prev.intersection(&range).copied().collect(),
        });
    }
    all.unwrap_or_default()
}

fn cooper_splitting() -> Outcome {
    timed(|| {
        let family = SemigroupFamily::new(DirectSumKernel(vec![
            halfline_family(CellGrid1D::new(1, 8, 1).unwrap()),
            circulant_family(4, 1, 1),
        ]));
        let w = core(wold_cooper(&family, 8, &Tolerances::default()))?;
        let mut map: Vec<Option<usize>> = (0..8).map(|i| (i + 1 < 8).then_some(i + 1)).collect();
        map.extend((0..4).map(|i| Some(8 + (i + 1) % 4)));
        let oracle = range_intersection(&map, 8);
        let block = core(Subspace::coordinate(12, &(8..12).collect::<IndexSet>()))?;
        ensure(w.unitary_part.dim() == 4 && oracle.len() == 4, || {
            format!("dimension {} vs oracle {}", w.unitary_part.dim(), oracle.len())
        })?;
        let angle = core(max_principal_angle(&w.unitary_part, &block))?;
        ensure(angle <= ANGLE_TOL && w.stabilized, || format!("angle {angle:e}"))?;
        Ok(format!("dim 4 (oracle 4), angle {angle:.1e}"))
    })
}

fn fourfold_of_blocks() -> Outcome {
    let (pair, dims) = core(four_block_pair(1, 4, 3))?;
    let split = core(fourfold_decompose(&pair, 8, &[1], &Tolerances::default()))?;
    ensure(split.dims() == dims, || format!("{:?} vs {dims:?}", split.dims()))?;
    let worst = split.reduction_residuals.iter().fold(0.0f64, |a, &b| a.max(b));
    ensure(worst <= RESID_TOL, || format!("reduction residual {worst:e}"))?;
    Ok(format!("dims {dims:?}, reduction residual {worst:.1e}"))
}

fn commutant_of_cut_shifts() -> Outcome {
    let mut out = Vec::new();
    for (m, r) in [(2, 1), (4, 2), (3, 3)] {
        let c = core(commutant_of_partial_isometries(m, r, &Tolerances::default()))?;
        let mut eqs = Vec::new();
        let all: Vec<usize> = (0..m * r).collect();
        for j in 1..m {
            let (e0, e1) = core(partial_isometry_pair(m, j, r))?;
            eqs.extend(commutator_rows(&integer_matrix(&e0), &all, &all));
            eqs.extend(commutator_rows(&integer_matrix(&e1), &all, &all));
        }
        let n2 = (m * r) * (m * r);
        let oracle = n2 - integer_rank(eqs);
        ensure(c.dim == r * r && oracle == r * r, || format!("(m,r)=({m},{r}): dim {} oracle {oracle}", c.dim))?;
        ensure(
            c.structure_verdict == StructureVerdict::FiberScalar && c.max_structure_residual <= RESID_TOL,
            || format!("(m,r)=({m},{r}): structure residual {:e}", c.max_structure_residual),
        )?;
        out.push(format!("({m},{r})->{}", c.dim));
    }
    Ok(format!("dims {} match exact nullity", out.join(" ")))
}

fn double_commutant_of_mz() -> Outcome {
    let mut out = Vec::new();
    for (d, r) in [(1, 1), (3, 2)] {
        let c = core(doubly_commutant_of_mz(d, r, &Tolerances::default()))?;
        let n = (d + 1) * r;
        let mz: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j + r)).collect()).collect();
        let mz_adj: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| mz[j][i]).collect()).collect();
        let (all, low): (Vec<usize>, Vec<usize>) = ((0..n).collect(), (0..d * r).collect());
        let mut eqs = commutator_rows(&mz, &all, &low);
        eqs.extend(commutator_rows(&mz_adj, &low, &all));
        let oracle = n * n - integer_rank(eqs);
        ensure(c.dim == r * r && oracle == r * r, || format!("(d,r)=({d},{r}): dim {} oracle {oracle}", c.dim))?;
        // Every element is I ⊗ ω: equal diagonal blocks, zero off-diagonal blocks.
        for b in &c.basis {
            for bi in 0..=d {
                for bj in 0..=d {
                    for i in 0..r {
                        for j in 0..r {
                            let v = b.get(bi * r + i, bj * r + j);
                            let want = if bi == bj { b.get(i, j) } else { Default::default() };
                            ensure((v - want).norm() <= RESID_TOL, || format!("(d,r)=({d},{r}) block ({bi},{bj})"))?;
                        }
                    }
                }
            }
        }
        ensure(
            c.structure_verdict == StructureVerdict::FiberScalar && c.max_structure_residual <= RESID_TOL,
            || format!("(d,r)=({d},{r}): residual {:e}", c.max_structure_residual),
        )?;
        out.push(format!("({d},{r})->{}", c.dim));
    }
    Ok(format!("dims {} with block form I (x) omega", out.join(" ")))
}

fn quadrant_coordinates(m: usize, extent: usize) -> IndexSet {
    let side = 2 * m * extent;
    let half = m * extent;
    (0..side)
        .flat_map(|c1| (0..side).map(move |c2| (c1, c2)))
        .filter(|&(c1, c2)| c1 >= half && c2 >= half)
        .map(|(c1, c2)| c1 * side + c2)
        .collect()
}

fn dual_of_l_region() -> Outcome {
    for extent in [2, 3] {
        let setup = core(l_region_setup(1, extent, 1))?;
        let dual = core(dual_pair(&setup, 4 * extent, &Tolerances::default()))?;
        let support = dual.wt_h.coordinate_support();
        ensure(support.as_ref() == Some(&quadrant_coordinates(1, extent)), || {
            format!("T={extent}: dual space is not the quadrant")
        })?;
        let grid = QuadrantGrid2D::new(1, extent, 1).unwrap();
        for j in 0..=extent {
            let (s1, s2) = core(bishift_pair(&grid, j))?;
            let w1 = core(dual.dual.first.element(j))?;
            let w2 = core(dual.dual.second.element(j))?;
            ensure(w1 == s1 && w2 == s2, || format!("T={extent}, step {j}"))?;
        }
    }
    Ok("T in {2,3}: dual equals the bishift entrywise".into())
}

fn double_dual() -> Outcome {
    let mut radii = Vec::new();
    for extent in [2, 3] {
        let setup = core(l_region_setup(1, extent, 1))?;
        let orbit = 4 * extent;
        let report = core(double_dual_check(&setup, 4 * extent, orbit, &[1, 2], &Tolerances::default()))?;
        let pair = report.get("double_dual_pair").ok_or("no double_dual_pair entry")?;
        ensure(report.passed() && pair.residual == 0.0, || format!("T={extent}: {report:?}"))?;
        let ext = core(minimal_extension(&setup, orbit, &Tolerances::default()))?;
        ensure(ext.stabilized && ext.radius <= 2 * extent, || format!("T={extent}: radius {}", ext.radius))?;
        radii.push(ext.radius);
    }
    Ok(format!("double dual residual 0; orbit radii {radii:?} within 2mT"))
}

fn bundled_cnu_setups() -> Vec<ExtensionSetup> {
    vec![
        l_region_setup(1, 2, 1).unwrap(),
        l_region_setup(1, 3, 1).unwrap(),
        l_region_setup(2, 2, 1).unwrap(),
        quadrant_setup(1, 2, 1).unwrap(),
        quadrant_setup(1, 3, 2).unwrap(),
        cnu_unitary_setup(1, 2, 3).unwrap(),
        unitary_cnu_setup(1, 2, 3).unwrap(),
    ]
}

fn dual_is_cnu() -> Outcome {
    let tol = Tolerances::default();
    let setups = bundled_cnu_setups();
    for s in &setups {
        let k = 2 * s.ambient_dim();
        let original = core(product_unitary_part(&s.original_pair(), k, &tol))?;
        ensure(original.space.is_zero() && original.stabilized, || format!("{} is not c.n.u.", s.label()))?;
        let dual = core(dual_pair(s, 16, &tol))?;
        let u = core(product_unitary_part(&dual.dual, k, &tol))?;
        ensure(u.space.is_zero() && u.stabilized, || format!("{}: dual unitary part {}", s.label(), u.space.dim()))?;
    }
    Ok(format!("{} setups, dual unitary part 0", setups.len()))
}

fn dual_fourfold_of_blocks() -> Outcome {
    let (setup, dims) = core(four_block_dual_setup(1, 2, 3))?;
    let split = core(dual_fourfold(&setup, 8, 8, &[1], &Tolerances::default()))?;
    ensure(split.dims() == dims, || format!("{:?} vs {dims:?}", split.dims()))?;
    let worst = split.report.max_residual();
    ensure(split.report.passed() && worst <= RESID_TOL, || format!("{:?}", split.report))?;
    Ok(format!("dims {dims:?}, worst residual {worst:.1e}"))
}

fn semigroup_laws() -> Outcome {
    let mut families: Vec<(String, SemigroupFamily, Vec<usize>)> = Vec::new();
    let mut single = |f: SemigroupFamily, steps: Vec<usize>| families.push((f.label(), f, steps));
    single(halfline_family(CellGrid1D::new(2, 4, 1).unwrap()), vec![1, 2, 3]);
    single(halfline_family(CellGrid1D::new(1, 6, 2).unwrap()), vec![1, 2]);
    single(phi_family(HardyCoeffSpace::new(3, 4, 1).unwrap()), vec![1, 2, 4]);
    single(phi_family(HardyCoeffSpace::new(3, 2, 2).unwrap()), vec![1, 3]);
    single(circulant_family(4, 1, 1), vec![1, 2, 3]);
    let mut pairs = vec![
        ("bishift".to_string(), bishift_families(QuadrantGrid2D::new(1, 3, 1).unwrap())),
        ("bishift".to_string(), bishift_families(QuadrantGrid2D::new(2, 2, 1).unwrap())),
        ("modified_bishift".to_string(), modified_bishift_families(LRegionIndex::new(1, 2, 1).unwrap())),
        ("modified_bishift".to_string(), modified_bishift_families(LRegionIndex::new(1, 3, 2).unwrap())),
        ("four_block".to_string(), four_block_pair(1, 4, 3).unwrap().0),
    ];
    // Windows of at least three cells, so two generator steps leave columns to compare.
    let setups = [
        l_region_setup(1, 3, 1).unwrap(),
        l_region_setup(2, 2, 1).unwrap(),
        quadrant_setup(1, 3, 1).unwrap(),
        cnu_unitary_setup(1, 3, 2).unwrap(),
        unitary_cnu_setup(1, 3, 2).unwrap(),
        unitary_unitary_setup(1, 3, 3).unwrap(),
        four_block_dual_setup(1, 3, 2).unwrap().0,
    ];
    for s in &setups {
        pairs.push((format!("{} original", s.label()), s.original_pair()));
        let dual = core(dual_pair(s, 16, &Tolerances::default()))?;
        if dual.wt_h.dim() > 0 {
            pairs.push((format!("{} dual", s.label()), dual.dual));
        }
    }
    for (name, p) in pairs {
        families.push((format!("{name} first"), p.first, vec![1]));
        families.push((format!("{name} second"), p.second, vec![1]));
    }
    for (name, f, steps) in &families {
        let report = check_semigroup_law(f, steps, 0.0).map_err(|e| format!("{name}: {e}"))?;
        ensure(report.passed() && report.max_residual() == 0.0, || format!("{name}: {report:?}"))?;
        let zero: WindowedMap = core(f.element(0))?;
        ensure(zero == WindowedMap::identity(f.dim()), || format!("{name}: element(0) is not I"))?;
    }
    Ok(format!("{} families, residual exactly 0", families.len()))
}

fn golden_determinism() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let mut files: Vec<PathBuf> = fs::read_dir(root.join("scenarios"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    for f in &files {
        let stem = f.file_stem().unwrap().to_string_lossy().into_owned();
        let golden = fs::read(root.join("tests/golden").join(format!("{stem}.txt"))).map_err(|e| e.to_string())?;
        for _ in 0..2 {
            let out = Command::new(env!("CARGO_BIN_EXE_isoflow"))
                .arg("run")
                .arg(f)
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.success() && out.stdout == golden, || format!("{stem} differs from its golden"))?;
        }
    }
    Ok(format!("{} scenario files reproduced twice", files.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("bcl_identification", bcl_identification),
        ("partial_isometry_resolutions", partial_isometry_resolutions),
        ("cooper_splitting", cooper_splitting),
        ("fourfold_decomposition", fourfold_of_blocks),
        ("commutant_structure", commutant_of_cut_shifts),
        ("double_commutant_of_mz", double_commutant_of_mz),
        ("dual_example", dual_of_l_region),
        ("double_dual", double_dual),
        ("dual_cnu", dual_is_cnu),
        ("dual_fourfold", dual_fourfold_of_blocks),
        ("semigroup_laws", semigroup_laws),
        ("golden_determinism", golden_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {:02} {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:02} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
