use std::cell::RefCell;
use std::collections::BTreeMap;

use crate::cdga::Presentation;
use crate::exterior::{Form, MAX_GENERATORS};
use crate::gcs::GcsData;
use crate::scalars::{is_ident_char, parse_expr, CScalar, ExprContext, Poly, Radicand};

use super::{Diagnostic, Document, Parsed, Severity};

/// 1-based character column of byte offset `off` in `line`.
fn column(line: &str, off: usize) -> usize {
    line[..off.min(line.len())].chars().count() + 1
}

fn is_generator_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('e') && s[1..].chars().all(|c| c.is_ascii_digit())
}

/// One wedge term as written.
struct Term {
    indices: Vec<usize>,
    coeff: CScalar,
    /// Byte offset of the term in its line.
    offset: usize,
}

struct Block {
    line: usize,
    label: String,
    k: usize,
    b: Option<Form<CScalar>>,
    omega: Option<Form<CScalar>>,
    thetas: Option<Vec<Form<CScalar>>>,
    failed: bool,
}

#[derive(Default)]
struct Parser {
    diags: Vec<Diagnostic>,
    name: Option<String>,
    params: Vec<String>,
    dim: Option<usize>,
    equations: BTreeMap<usize, (usize, Form<CScalar>)>,
    structures: Vec<GcsData<CScalar>>,
    block: Option<Block>,
    /// The radicand of the first `sqrt(...)`; a document may use only one.
    radicand: Option<Poly>,
}

/// Parses a whole file, collecting every diagnostic.
pub fn parse(text: &str) -> Parsed {
    let mut p = Parser::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if !line.trim().is_empty() {
            p.statement(idx + 1, line);
        }
    }
    p.finish(text.lines().count().max(1))
}

impl Parser {
    fn push(&mut self, severity: Severity, line_no: usize, line: &str, off: usize, message: String, suggestion: Option<&str>) {
        self.diags.push(Diagnostic {
            severity,
            line: line_no,
            column: column(line, off),
            message,
            suggestion: suggestion.map(str::to_string),
        });
    }

    fn error(&mut self, line_no: usize, line: &str, off: usize, message: String, suggestion: Option<&str>) {
        self.push(Severity::Error, line_no, line, off, message, suggestion);
    }

    fn statement(&mut self, no: usize, line: &str) {
        let start = line.len() - line.trim_start().len();
        let body = line.trim();
        let word = body.split(|c: char| c.is_whitespace() || c == ':').next().unwrap_or("");
        match word {
            "algebra" => self.header(no, line, start),
            "dim" => self.dim_line(no, line, start),
            "d" => self.equation(no, line, start),
            "gcs" => self.gcs_open(no, line, start),
            "end" if body == "end" => self.gcs_close(no, line, start),
            "B" | "omega" | "thetas" if body[word.len()..].trim_start().starts_with(':') => {
                self.gcs_field(no, line, start, word)
            }
            _ => self.error(
                no,
                line,
                start,
                format!("unknown statement '{word}'"),
                Some("statements are 'algebra', 'dim', 'd e<j> = ...', 'gcs ... end'"),
            ),
        }
    }

    fn header(&mut self, no: usize, line: &str, start: usize) {
        if self.name.is_some() {
            self.error(no, line, start, "duplicate 'algebra' header".into(), None);
            return;
        }
        let rest = &line[start + "algebra".len()..];
        let mut words = rest.split_whitespace();
        let name = words.next().unwrap_or("");
        if name.is_empty() || !name.chars().all(is_ident_char) {
            self.error(no, line, start, "expected 'algebra NAME over Q'".into(), None);
            return;
        }
        let over = rest.find(" over ").map(|i| i + 6);
        let Some(over) = over else {
            self.error(no, line, start, "expected 'over Q' after the algebra name".into(), Some("algebra g over Q(alpha)"));
            return;
        };
        let field = rest[over..].trim();
        let field_off = start + "algebra".len() + over + (rest[over..].len() - rest[over..].trim_start().len());
        let mut params = Vec::new();
        if field != "Q" {
            let inner = field.strip_prefix("Q(").and_then(|s| s.strip_suffix(')'));
            let Some(inner) = inner else {
                self.error(no, line, field_off, format!("expected 'Q' or 'Q(params)', found '{field}'"), None);
                return;
            };
            for p in inner.split(',').map(str::trim) {
                let ok = !p.is_empty()
                    && p.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    && p.chars().all(is_ident_char)
                    && p != "i"
                    && p != "sqrt"
                    && !is_generator_name(p);
                if !ok {
                    self.error(no, line, field_off, format!("invalid parameter name '{p}'"), Some("parameters are identifiers other than i, sqrt and e<digits>"));
                    return;
                }
                if params.iter().any(|q: &String| q == p) {
                    self.error(no, line, field_off, format!("parameter '{p}' declared twice"), None);
                    return;
                }
                params.push(p.to_string());
            }
        }
        self.name = Some(name.to_string());
        self.params = params;
    }

    fn dim_line(&mut self, no: usize, line: &str, start: usize) {
        let arg = line[start + 3..].trim();
        match arg.parse::<usize>() {
            Ok(n) if (1..=MAX_GENERATORS).contains(&n) => {
                if self.dim.is_some() {
                    self.error(no, line, start, "duplicate 'dim' line".into(), None);
                } else {
                    self.dim = Some(n);
                }
            }
            _ => self.error(
                no,
                line,
                start + 4,
                format!("expected a dimension between 1 and {MAX_GENERATORS}, found '{arg}'"),
                None,
            ),
        }
    }

    fn equation(&mut self, no: usize, line: &str, start: usize) {
        let Some(n) = self.dim else {
            self.error(no, line, start, "equation before 'dim'".into(), Some("declare 'dim N' first"));
            return;
        };
        let after_d = start + 1;
        let Some(eq) = line[after_d..].find('=').map(|i| i + after_d) else {
            self.error(no, line, start, "expected 'd e<j> = ...'".into(), None);
            return;
        };
        let lhs = line[after_d..eq].trim();
        let lhs_off = after_d + (line[after_d..eq].len() - line[after_d..eq].trim_start().len());
        if !is_generator_name(lhs) {
            self.error(no, line, lhs_off, format!("expected a generator e<j>, found '{lhs}'"), None);
            return;
        }
        let j: usize = lhs[1..].parse().unwrap_or(0);
        if !(1..=n).contains(&j) {
            self.error(no, line, lhs_off, format!("generator {lhs} out of range 1..{n}"), None);
            return;
        }
        if let Some((first, _)) = self.equations.get(&j) {
            let msg = format!("duplicate definition of d e{j} (first on line {first})");
            self.error(no, line, start, msg, Some("combine both right-hand sides into one line"));
            return;
        }
        let Some(terms) = self.terms(no, line, eq + 1, line.len(), n, false, Some(2)) else {
            return;
        };
        let mut form = Form::zero(n);
        for t in &terms {
            if t.indices.iter().any(|&i| i >= j) {
                let (a, b) = (t.indices[0], t.indices[1]);
                self.push(
                    Severity::Warning,
                    no,
                    line,
                    t.offset,
                    format!("e{a}^e{b} in d e{j} does not satisfy i, k < j"),
                    Some("the basis is then not in nilpotent triangular form"),
                );
            }
            form = &form + &Form::wedge_of(n, &t.indices, t.coeff.clone());
        }
        self.equations.insert(j, (no, form));
    }

    fn gcs_open(&mut self, no: usize, line: &str, start: usize) {
        if let Some(b) = &self.block {
            let msg = format!("gcs block '{}' opened on line {} is not closed", b.label, b.line);
            self.error(no, line, start, msg, Some("add 'end'"));
            self.block = None;
        }
        let words: Vec<&str> = line[start..].split_whitespace().collect();
        let parsed = match words[..] {
            ["gcs", label, "type", k] if label.chars().all(is_ident_char) => k.parse::<usize>().ok().map(|k| (label, k)),
            _ => None,
        };
        let Some((label, k)) = parsed else {
            self.error(no, line, start, "expected 'gcs LABEL type K'".into(), None);
            // Still track the block so its fields are not reported as stray.
            self.block = Some(Block { line: no, label: String::new(), k: 0, b: None, omega: None, thetas: None, failed: true });
            return;
        };
        self.block = Some(Block {
            line: no,
            label: label.to_string(),
            k,
            b: None,
            omega: None,
            thetas: None,
            failed: false,
        });
    }

    fn gcs_field(&mut self, no: usize, line: &str, start: usize, key: &str) {
        let Some(n) = self.dim else {
            self.error(no, line, start, "gcs data before 'dim'".into(), None);
            return;
        };
        if self.block.is_none() {
            self.error(no, line, start, format!("'{key}:' outside a gcs block"), Some("open one with 'gcs LABEL type K'"));
            return;
        }
        let colon = start + line[start..].find(':').expect("checked by caller");
        let mut forms = Vec::new();
        let mut ok = true;
        if key == "thetas" {
            let mut from = colon + 1;
            for piece in line[colon + 1..].split(';') {
                let to = from + piece.len();
                if piece.trim().is_empty() && line[colon + 1..].trim().is_empty() {
                    break;
                }
                match self.terms(no, line, from, to, n, true, Some(1)) {
                    Some(ts) => forms.push(sum(n, &ts)),
                    None => ok = false,
                }
                from = to + 1;
            }
        } else {
            match self.terms(no, line, colon + 1, line.len(), n, true, Some(2)) {
                Some(ts) => forms.push(sum(n, &ts)),
                None => ok = false,
            }
        }
        let block = self.block.as_mut().expect("checked above");
        if !ok {
            block.failed = true;
            return;
        }
        let dup = match key {
            "B" => block.b.replace(forms.pop().expect("one form")).is_some(),
            "omega" => block.omega.replace(forms.pop().expect("one form")).is_some(),
            _ => block.thetas.replace(forms).is_some(),
        };
        if dup {
            self.error(no, line, start, format!("duplicate '{key}:' in gcs block"), None);
            if let Some(b) = self.block.as_mut() {
                b.failed = true;
            }
        }
    }

    fn gcs_close(&mut self, no: usize, line: &str, start: usize) {
        let Some(b) = self.block.take() else {
            self.error(no, line, start, "'end' without a gcs block".into(), None);
            return;
        };
        if b.failed {
            return;
        }
        let n = self.dim.unwrap_or(0);
        let data = GcsData::new(
            &b.label,
            b.k,
            b.b.unwrap_or_else(|| Form::zero(n)),
            b.omega.unwrap_or_else(|| Form::zero(n)),
            b.thetas.unwrap_or_default(),
        );
        match data {
            Ok(d) => self.structures.push(d),
            Err(e) => {
                let line_text = format!("gcs {} type {}", b.label, b.k);
                self.error(b.line, &line_text, 0, format!("invalid gcs block '{}': {e}", b.label), None);
            }
        }
    }

    /// Parses `line[from..to]` as a sum of `[coeff] e<i>^e<k>...` terms.
    #[allow(clippy::too_many_arguments)]
    fn terms(
        &mut self,
        no: usize,
        line: &str,
        from: usize,
        to: usize,
        n: usize,
        complex: bool,
        grade: Option<usize>,
    ) -> Option<Vec<Term>> {
        let text = &line[from..to];
        if text.trim() == "0" {
            return Some(Vec::new());
        }
        if text.trim().is_empty() {
            self.error(no, line, to, "missing right-hand side".into(), Some("write 0 for a zero form"));
            return None;
        }
        let mut out = Vec::new();
        let mut ok = true;
        for (a, b) in split_terms(line, from, to) {
            match self.term(no, line, a, b, n, complex, grade) {
                Some(t) => out.push(t),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn term(&mut self, no: usize, line: &str, a: usize, b: usize, n: usize, complex: bool, grade: Option<usize>) -> Option<Term> {
        let bytes = line.as_bytes();
        let ws = |c: u8| c.is_ascii_whitespace();
        let mut a = a;
        while a < b && ws(bytes[a]) {
            a += 1;
        }
        let mut end = b;
        while end > a && ws(bytes[end - 1]) {
            end -= 1;
        }
        if a == end {
            self.error(no, line, a, "missing term".into(), None);
            return None;
        }
        // Generators are read right to left: e<i> (^ e<k>)*.
        let mut gens: Vec<(usize, usize, usize)> = Vec::new(); // (start, digits start, end)
        let mut pos = end;
        let chain_start = loop {
            let mut q = pos;
            while q > a && bytes[q - 1].is_ascii_digit() {
                q -= 1;
            }
            let valid = q < pos && q > a && bytes[q - 1] == b'e' && (q - 1 == a || !is_ident_char(bytes[q - 2] as char));
            if !valid {
                let glued = q < pos && q > a + 1 && bytes[q - 1] == b'e';
                if glued {
                    self.error(
                        no,
                        line,
                        q - 1,
                        "missing separator between coefficient and generator".into(),
                        Some("write '2 e1^e2' or '2*e1^e2'"),
                    );
                } else if gens.is_empty() {
                    let sugg = Some("terms have the form [coefficient] e<i>^e<k>");
                    self.error(no, line, a, format!("expected a wedge of generators in '{}'", &line[a..end]), sugg);
                } else {
                    self.error(no, line, pos, "expected a generator before '^'".into(), None);
                }
                return None;
            }
            gens.push((q - 1, q, pos));
            let mut r = q - 1;
            while r > a && ws(bytes[r - 1]) {
                r -= 1;
            }
            if r > a && bytes[r - 1] == b'^' {
                pos = r - 1;
                while pos > a && ws(bytes[pos - 1]) {
                    pos -= 1;
                }
                continue;
            }
            break q - 1;
        };
        gens.reverse();

        let mut indices = Vec::new();
        let mut ok = true;
        for &(s, d, e) in &gens {
            let j: usize = line[d..e].parse().unwrap_or(0);
            if !(1..=n).contains(&j) {
                self.error(no, line, s, format!("generator e{} out of range 1..{n}", &line[d..e]), None);
                ok = false;
            } else if indices.contains(&j) {
                self.error(no, line, s, format!("repeated generator e{j} in a wedge product"), Some("e^j ^ e^j = 0; drop the term"));
                ok = false;
            }
            indices.push(j);
        }
        if let Some(g) = grade {
            if ok && indices.len() != g {
                self.error(no, line, chain_start, format!("expected a {g}-form term, found degree {}", indices.len()), None);
                ok = false;
            }
        }

        let mut coeff_text = line[a..chain_start].trim_end();
        if let Some(stripped) = coeff_text.strip_suffix('*') {
            coeff_text = stripped.trim_end();
        }
        let coeff = match coeff_text.trim() {
            "" | "+" => Some(CScalar::from_int(1)),
            "-" => Some(CScalar::from_int(-1)),
            _ => self.coefficient(no, line, a, coeff_text, complex),
        };
        match (ok, coeff) {
            (true, Some(coeff)) => Some(Term { indices, coeff, offset: a }),
            _ => None,
        }
    }

    fn coefficient(&mut self, no: usize, line: &str, off: usize, text: &str, complex: bool) -> Option<CScalar> {
        let params = self.params.clone();
        let ident = |name: &str| {
            if complex && name == "i" {
                Some(CScalar::i())
            } else {
                params.iter().any(|p| p == name).then(|| CScalar::param(name))
            }
        };
        let seen = RefCell::new(self.radicand.clone());
        let call = |name: &str, arg: CScalar| -> Result<CScalar, String> {
            if name != "sqrt" {
                return Err(format!("unknown function '{name}'"));
            }
            let Some(p) = arg.as_poly() else {
                return Err("sqrt takes a polynomial in the parameters".into());
            };
            let mut seen = seen.borrow_mut();
            match seen.as_ref() {
                Some(r) if r != p => Err(format!("only one square root per file: sqrt({p}) after sqrt({r})")),
                _ => {
                    *seen = Some(p.clone());
                    Ok(CScalar::sqrt_of(Radicand::new(p.clone())))
                }
            }
        };
        match parse_expr(text, &ExprContext { ident: &ident, call: &call }) {
            Ok(c) => {
                self.radicand = seen.into_inner();
                Some(c)
            }
            Err(e) => {
                let at = off + e.offset;
                let word: String = text[e.offset.min(text.len())..].chars().take_while(|&c| is_ident_char(c)).collect();
                let (msg, sugg) = if e.message.starts_with("unknown identifier") {
                    if is_generator_name(&word) {
                        (format!("generator {word} inside a coefficient"), Some("generators follow the coefficient: c e1^e2".to_string()))
                    } else if word == "i" {
                        ("'i' is only allowed in gcs blocks".to_string(), None)
                    } else {
                        (
                            format!("undeclared parameter '{word}'"),
                            Some(format!("declare it in the header, e.g. 'over Q({word})'")),
                        )
                    }
                } else {
                    (format!("malformed coefficient: {}", e.message), None)
                };
                self.error(no, line, at, msg, sugg.as_deref());
                None
            }
        }
    }

    fn finish(mut self, last_line: usize) -> Parsed {
        if let Some(b) = self.block.take() {
            let msg = format!("gcs block '{}' is not closed", b.label);
            self.diags.push(Diagnostic {
                severity: Severity::Error,
                line: b.line,
                column: 1,
                message: msg,
                suggestion: Some("add 'end'".into()),
            });
        }
        let missing = |what: &str, sugg: &str| Diagnostic {
            severity: Severity::Error,
            line: last_line.min(1),
            column: 1,
            message: format!("missing {what}"),
            suggestion: Some(sugg.into()),
        };
        if self.name.is_none() {
            self.diags.push(missing("'algebra' header", "start the file with 'algebra NAME over Q(alpha)'"));
        }
        if self.dim.is_none() {
            self.diags.push(missing("'dim' line", "add 'dim N' after the header"));
        }
        self.diags.sort_by_key(|d| (d.line, d.column));
        if self.diags.iter().any(|d| d.severity == Severity::Error) {
            return Parsed {
                document: None,
                diagnostics: self.diags,
            };
        }
        let name = self.name.expect("checked");
        let n = self.dim.expect("checked");
        let params: Vec<&str> = self.params.iter().map(String::as_str).collect();
        let mut p = Presentation::new(&name, n, &params).expect("dimension checked");
        for (j, (_, form)) in &self.equations {
            for (blade, c) in form.terms() {
                let idx: Vec<usize> = blade.indices().collect();
                p.set_constant(*j, idx[0], idx[1], c.clone()).expect("indices checked");
            }
        }
        Parsed {
            document: Some(Document {
                presentation: p,
                structures: self.structures,
            }),
            diagnostics: self.diags,
        }
    }
}

fn sum(n: usize, terms: &[Term]) -> Form<CScalar> {
    terms
        .iter()
        .fold(Form::zero(n), |acc, t| &acc + &Form::wedge_of(n, &t.indices, t.coeff.clone()))
}

/// Byte ranges of the top-level `+`/`-` separated terms of `line[from..to]`;
/// each range keeps its leading sign.
fn split_terms(line: &str, from: usize, to: usize) -> Vec<(usize, usize)> {
    let bytes = line.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = from;
    let mut prev: Option<u8> = None;
    for i in from..to {
        let c = bytes[i];
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 => {
                let binary = matches!(prev, Some(p) if !matches!(p, b'*' | b'/' | b'^' | b'(' | b'+' | b'-'));
                if binary {
                    out.push((start, i));
                    start = i;
                }
            }
            _ => {}
        }
        if !c.is_ascii_whitespace() {
            prev = Some(c);
        }
    }
    out.push((start, to));
    out
}
