//! Command implementations behind the `kstab` binary.
//!
//! Exit code contract: 0 = success / verified / certified, 1 = negative
//! mathematical result (not ample, refuted, identity mismatch), 2 = usage
//! error. Every rational printed anywhere is a canonical lowest-terms
//! fraction string.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;

use crate::amplecone::{self, BundleParams};
use crate::certify::{
    certify_margin_ladder, scan_grid, write_certificates, Outcome, PositivityCertificate,
    TriangleRegion,
};
use crate::criterion::{
    assemble_c, boundary_term_consistency, stated_c_tilde_diagonal,
    stated_integral_p, stated_integral_tp, CriterionData,
};
use crate::ratpoly::{rat, rat_int, LineSubstitution, LinearFactor, Rational, UniPoly};
use crate::rootdata::build_p;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// One line of the verification report.
pub struct CheckLine {
    pub name: &'static str,
    pub passed: bool,
    pub detail: Option<String>,
}

impl CheckLine {
    fn pass(name: &'static str) -> Self {
        Self { name, passed: true, detail: None }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Self { name, passed: false, detail: Some(detail) }
    }
}

/// The eight exact identities of the verification suite, recomputed from
/// the given criterion data (so a perturbed `P` or `Q` shows up as FAILs).
pub fn identity_suite(data: &CriterionData) -> Vec<CheckLine> {
    let mut lines = Vec::with_capacity(8);

    lines.push(match build_p() {
        Ok(_) => CheckLine::pass("P product formula"),
        Err(e) => CheckLine::fail("P product formula", e.to_string()),
    });

    let int_p = data.integral_p();
    lines.push(if int_p == stated_integral_p() {
        CheckLine::pass("closed form of integral P")
    } else {
        CheckLine::fail(
            "closed form of integral P",
            format!("computed {int_p}"),
        )
    });

    let int_tp = data.integral_tp();
    lines.push(if int_tp == stated_integral_tp() {
        CheckLine::pass("closed form of integral t*P")
    } else {
        CheckLine::fail(
            "closed form of integral t*P",
            format!("computed {int_tp}"),
        )
    });

    for (weighted, name) in [
        (false, "closed form of unweighted endpoint term"),
        (true, "closed form of weighted endpoint term"),
    ] {
        lines.push(match boundary_term_consistency(data, weighted) {
            Ok(()) => CheckLine::pass(name),
            Err(_) => {
                let diff = &crate::criterion::stated_boundary(weighted)
                    - &data.boundary_quadrature(weighted);
                CheckLine::fail(name, format!("closed form - quadrature = {diff}"))
            }
        });
    }

    // The three factorizations are facts about the criterion polynomial
    // itself, which is assembled from the reference closed forms.
    let b_half = assemble_c().substitute_line(&LineSubstitution::BEquals(rat(1, 2)));
    lines.push(if b_half == b_half_display() {
        CheckLine::pass("b = 1/2 factorization of C")
    } else {
        CheckLine::fail("b = 1/2 factorization of C", format!("computed {b_half}"))
    });

    let diag = match assemble_c().divide_linear_factor(LinearFactor::BMinusA) {
        Ok(ct) => {
            let restricted = ct.substitute_line(&LineSubstitution::BEqualsA);
            if restricted == stated_c_tilde_diagonal() {
                CheckLine::pass("diagonal reduction C/(b-a)")
            } else {
                CheckLine::fail("diagonal reduction C/(b-a)", format!("computed {restricted}"))
            }
        }
        Err(e) => CheckLine::fail("diagonal reduction C/(b-a)", e.to_string()),
    };
    lines.push(diag);

    let a_zero = assemble_c().substitute_line(&LineSubstitution::AEquals(rat_int(0)));
    lines.push(if a_zero == a_zero_display() {
        CheckLine::pass("a = 0 factorization of C")
    } else {
        CheckLine::fail("a = 0 factorization of C", format!("computed {a_zero}"))
    });

    lines
}

/// The two boundary inequality chains, each checked exactly at 1000
/// rational sample points.
pub fn inequality_chains() -> Vec<CheckLine> {
    let mut lines = Vec::with_capacity(2);

    let b_half = assemble_c().substitute_line(&LineSubstitution::BEquals(rat(1, 2)));
    let mut chain1 = true;
    let mut witness1 = None;
    for k in 1..=1000i64 {
        let a = rat(k, 2002);
        let bound = rat(249, 61440) * (rat_int(1) - rat_int(2) * &a).pow(2);
        if b_half.eval(&a) <= bound {
            chain1 = false;
            witness1 = Some(a);
            break;
        }
    }
    lines.push(if chain1 {
        CheckLine::pass("chain C(a,1/2) > 249(1-2a)^2/61440 at 1000 points")
    } else {
        CheckLine::fail(
            "chain C(a,1/2) > 249(1-2a)^2/61440 at 1000 points",
            format!("violated at a = {}", witness1.unwrap()),
        )
    });

    let a_zero = assemble_c().substitute_line(&LineSubstitution::AEquals(rat_int(0)));
    let mut chain2 = true;
    let mut witness2 = None;
    for k in 1..=1000i64 {
        let b = rat(k, 2000);
        let bound = b.pow(4) * (rat_int(1) - &b) * rat(39, 4) / rat_int(80);
        if a_zero.eval(&b) <= bound {
            chain2 = false;
            witness2 = Some(b);
            break;
        }
    }
    lines.push(if chain2 {
        CheckLine::pass("chain C(0,b) > b^4(1-b)(39/4)/80 at 1000 points")
    } else {
        CheckLine::fail(
            "chain C(0,b) > b^4(1-b)(39/4)/80 at 1000 points",
            format!("violated at b = {}", witness2.unwrap()),
        )
    });

    lines
}

fn b_half_display() -> UniPoly {
    let one_minus_2a = UniPoly::from_coeffs(vec![rat_int(1), rat_int(-2)]);
    let sextic = UniPoly::from_coeffs(vec![
        rat_int(249),
        rat_int(884),
        rat_int(524),
        rat_int(1888),
        rat_int(-464),
        rat_int(-2496),
        rat_int(576),
    ]);
    (&(&one_minus_2a * &one_minus_2a) * &sextic).scale(&rat(1, 61440))
}

fn a_zero_display() -> UniPoly {
    let b4 = UniPoly::monomial(rat_int(1), 4);
    let one_minus_b = UniPoly::from_coeffs(vec![rat_int(1), rat_int(-1)]);
    let cubic = UniPoly::from_coeffs(vec![rat_int(20), rat_int(-15), rat_int(-11), rat_int(5)]);
    (&(&b4 * &one_minus_b) * &cubic).scale(&rat(1, 80))
}

/// `verify-paper`: run the identity suite and the inequality chains,
/// printing one PASS/FAIL line per check.
pub fn cmd_verify_paper(out: &mut dyn Write) -> io::Result<i32> {
    let data = match CriterionData::standard() {
        Ok(d) => d,
        Err(e) => {
            writeln!(out, "FAIL P product formula: {e}")?;
            return Ok(EXIT_NEGATIVE);
        }
    };
    let identities = identity_suite(&data);
    let chains = inequality_chains();
    let mut all_passed = true;
    writeln!(out, "identity checks: {}", identities.len())?;
    for line in identities.iter().chain(chains.iter()) {
        if line.passed {
            writeln!(out, "PASS {}", line.name)?;
        } else {
            all_passed = false;
            match &line.detail {
                Some(d) => writeln!(out, "FAIL {} ({d})", line.name)?,
                None => writeln!(out, "FAIL {}", line.name)?,
            }
        }
    }
    if all_passed {
        writeln!(out, "all checks passed")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "some checks FAILED; see lines above")?;
        Ok(EXIT_NEGATIVE)
    }
}

fn approx_str(x: &Rational) -> String {
    match x.to_f64() {
        Some(v) => format!("{v:.6e}"),
        None => "overflow".to_string(),
    }
}

/// `check a b c`: ampleness, normalization, moment polytope, criterion.
pub fn cmd_check(a: i64, b: i64, c: i64, approx: bool, out: &mut dyn Write) -> io::Result<i32> {
    let p = BundleParams::new(a, b, c);
    writeln!(out, "bundle: {p}")?;
    match amplecone::moment_polytope(&p) {
        Ok(seg) => writeln!(
            out,
            "moment polytope: {} + [{}, {}] alpha2",
            seg.base_weight, seg.lo, seg.hi
        )?,
        Err(e) => writeln!(out, "moment polytope: empty ({e})")?,
    }
    if !amplecone::is_ample(&p) {
        writeln!(out, "ample: no (ampleness requires 0 < a < min(b, c))")?;
        writeln!(out, "verdict: NotAmple")?;
        return Ok(EXIT_NEGATIVE);
    }
    writeln!(out, "ample: yes")?;
    let n = amplecone::normalize(&p).expect("ample implies b + c > 0");
    writeln!(out, "normalized (a, b): ({}, {})", n.a, n.b)?;
    let report = amplecone::kstability_verdict(&p).expect("ample was just checked");
    writeln!(out, "C({}, {}) = {}", report.a, report.b, report.value)?;
    if approx {
        writeln!(out, "C approx {} (non-authoritative)", approx_str(&report.value))?;
    }
    writeln!(out, "verdict: {}", report.verdict)?;
    Ok(EXIT_OK)
}

fn open_out(path: &Path) -> io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// `scan n`: exact CSV of C over the grid, plus minimum and argmin.
pub fn cmd_scan(
    n: u32,
    out_path: Option<&PathBuf>,
    approx: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    if n < 2 {
        writeln!(err, "usage error: scan needs n >= 2")?;
        return Ok(EXIT_USAGE);
    }
    let result = scan_grid(n);

    let csv = |sink: &mut dyn Write| -> io::Result<()> {
        if approx {
            sink.write_all(b"a,b,C,C_approx\n")?;
        } else {
            sink.write_all(b"a,b,C\n")?;
        }
        for row in &result.rows {
            if approx {
                writeln!(sink, "{},{},{},{}", row.a, row.b, row.value, approx_str(&row.value))?;
            } else {
                writeln!(sink, "{},{},{}", row.a, row.b, row.value)?;
            }
        }
        Ok(())
    };

    match out_path {
        Some(path) => {
            let mut file = match open_out(path) {
                Ok(f) => f,
                Err(e) => {
                    writeln!(err, "usage error: cannot write {}: {e}", path.display())?;
                    return Ok(EXIT_USAGE);
                }
            };
            csv(&mut file)?;
            file.flush()?;
        }
        None => csv(out)?,
    }

    // the summary goes to the report stream; when the CSV went to stdout the
    // report moves to stderr so the CSV stays clean
    let report: &mut dyn Write = if out_path.is_some() { out } else { err };
    let min = result.min_row();
    writeln!(report, "rows: {}", result.rows.len())?;
    writeln!(report, "minimum C = {} at (a, b) = ({}, {})", min.value, min.a, min.b)?;
    if approx {
        writeln!(report, "minimum approx {} (non-authoritative)", approx_str(&min.value))?;
    }
    Ok(EXIT_OK)
}

fn region_str(region: &TriangleRegion) -> String {
    let [v0, v1, v2] = region.vertices();
    format!(
        "({}, {}), ({}, {}), ({}, {})",
        v0.0, v0.1, v1.0, v1.1, v2.0, v2.1
    )
}

fn outcome_str(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Certified => "Certified".to_string(),
        Outcome::Refuted { witness, value } => {
            format!("Refuted (witness ({}, {}), value {})", witness.0, witness.1, value)
        }
        Outcome::Inconclusive { unresolved } => {
            format!("Inconclusive ({unresolved} unresolved cells)")
        }
    }
}

/// `certify --delta p/q`: certificates for C and C~ on the delta-shrunken
/// triangles, written as a replayable JSON file.
pub fn cmd_certify(
    delta: &str,
    max_depth: u32,
    out_path: Option<&PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let delta: Rational = match delta.parse() {
        Ok(d) => d,
        Err(_) => {
            writeln!(err, "usage error: --delta wants a fraction like 1/10, got {delta:?}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let certs: Vec<PositivityCertificate> = match certify_margin_ladder(std::slice::from_ref(&delta), max_depth) {
        Ok(c) => c,
        Err(e) => {
            writeln!(err, "usage error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };

    let mut wrote_to: Option<String> = None;
    match out_path {
        Some(path) => {
            if let Err(e) = write_certificates(path, &certs) {
                writeln!(err, "usage error: cannot write {}: {e}", path.display())?;
                return Ok(EXIT_USAGE);
            }
            wrote_to = Some(path.display().to_string());
        }
        None => {
            let dtos: Vec<crate::certify::CertificateDto> = certs
                .iter()
                .map(crate::certify::CertificateDto::from_certificate)
                .collect();
            let mut text = serde_json::to_vec_pretty(&dtos)?;
            text.push(b'\n');
            out.write_all(&text)?;
        }
    }

    // report lines go to stdout when the JSON went to a file, otherwise to
    // stderr so the JSON on stdout stays clean
    let report: &mut dyn Write = if out_path.is_some() { out } else { err };
    writeln!(report, "delta = {delta}, max depth = {max_depth}")?;
    let mut all_certified = true;
    for cert in &certs {
        let leaves = cert.leaf_count();
        writeln!(
            report,
            "{} on [{}]: {}, {} {}",
            cert.polynomial_id.name(),
            region_str(&cert.region),
            outcome_str(&cert.outcome),
            leaves,
            if leaves == 1 { "leaf" } else { "leaves" }
        )?;
        all_certified &= matches!(cert.outcome, Outcome::Certified);
    }
    if let Some(path) = wrote_to {
        writeln!(report, "wrote {} certificates to {path}", certs.len())?;
    }
    writeln!(report, "overall: {}", if all_certified { "Certified" } else { "NOT certified" })?;
    Ok(if all_certified { EXIT_OK } else { EXIT_NEGATIVE })
}

/// `expand`: the criterion polynomial, one exact term per line, sorted by
/// (total degree, a exponent).
pub fn cmd_expand(
    out_path: Option<&PathBuf>,
    approx: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    let c = assemble_c();
    let terms = c.terms_by_total_degree();

    let dump = |sink: &mut dyn Write| -> io::Result<()> {
        writeln!(
            sink,
            "# C(a,b): {} terms, total degree {}, sorted by (total degree, a exponent)",
            terms.len(),
            c.total_degree().unwrap_or(0)
        )?;
        for ((i, j), coeff) in &terms {
            let mut line = coeff.to_string();
            if *i > 0 {
                line.push_str(&format!(" a^{i}"));
            }
            if *j > 0 {
                line.push_str(&format!(" b^{j}"));
            }
            if approx {
                line.push_str(&format!("  # approx {}", approx_str(coeff)));
            }
            writeln!(sink, "{line}")?;
        }
        Ok(())
    };

    match out_path {
        Some(path) => {
            let mut file = match open_out(path) {
                Ok(f) => f,
                Err(e) => {
                    writeln!(err, "usage error: cannot write {}: {e}", path.display())?;
                    return Ok(EXIT_USAGE);
                }
            };
            dump(&mut file)?;
            file.flush()?;
        }
        None => dump(out)?,
    }
    Ok(EXIT_OK)
}
