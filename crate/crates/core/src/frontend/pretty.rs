use std::fmt::Write;

use num_traits::{One, Zero};

use crate::cdga::Presentation;
use crate::exterior::Form;
use crate::gcs::GcsData;
use crate::scalars::CScalar;

use super::Document;

/// Coefficient prefix for a term: `""`, `"-"`, `"2 "`, `"-1/2 "`,
/// `"(1+alpha) "`, `"-(1+alpha) "`.
pub fn format_coefficient(c: &CScalar) -> String {
    if c.is_one() {
        return String::new();
    }
    let neg = -c;
    if neg.is_one() {
        return "-".into();
    }
    if let Some(q) = c.constant_value() {
        return format!("{q} ");
    }
    let text = c.to_string();
    let neg_text = neg.to_string();
    if text.starts_with('-') && !neg_text.starts_with('-') {
        format!("-({neg_text}) ")
    } else {
        format!("({text}) ")
    }
}

/// `0`, or terms like `e1^e2 - (1+alpha) e3^e4` in blade order.
pub fn format_form(form: &Form<CScalar>) -> String {
    let mut out = String::new();
    for (blade, c) in form.terms() {
        if c.is_zero() {
            continue;
        }
        let wedge = blade.indices().map(|i| format!("e{i}")).collect::<Vec<_>>().join("^");
        let coeff = format_coefficient(c);
        let term = if wedge.is_empty() {
            let t = coeff.trim_end();
            match t {
                "" => "1".to_string(),
                "-" => "-1".to_string(),
                _ => t.to_string(),
            }
        } else {
            format!("{coeff}{wedge}")
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            let _ = write!(out, " - {}", rest.trim_start());
        } else {
            let _ = write!(out, " + {term}");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Header, `dim`, and one `d` line per non-closed generator.
pub fn pretty_presentation(p: &Presentation<CScalar>) -> String {
    let mut out = String::new();
    let _ = write!(out, "algebra {} over Q", p.name());
    if !p.parameters().is_empty() {
        let _ = write!(out, "({})", p.parameters().join(", "));
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "dim {}", p.dim());
    for j in 1..=p.dim() {
        let de = p.de(j);
        if !de.is_zero() {
            let _ = writeln!(out, "d e{j} = {}", format_form(&de));
        }
    }
    out
}

fn pretty_gcs(out: &mut String, g: &GcsData<CScalar>) {
    let _ = writeln!(out, "gcs {} type {}", g.label, g.k);
    if !g.b.is_zero() {
        let _ = writeln!(out, "  B: {}", format_form(&g.b));
    }
    if !g.omega.is_zero() {
        let _ = writeln!(out, "  omega: {}", format_form(&g.omega));
    }
    if !g.thetas.is_empty() {
        let ts: Vec<String> = g.thetas.iter().map(format_form).collect();
        let _ = writeln!(out, "  thetas: {}", ts.join("; "));
    }
    let _ = writeln!(out, "end");
}

/// Canonical text of a document; parsing it gives the same document back.
pub fn pretty(doc: &Document) -> String {
    let mut out = pretty_presentation(&doc.presentation);
    for g in &doc.structures {
        out.push('\n');
        pretty_gcs(&mut out, g);
    }
    out
}
