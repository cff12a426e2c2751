//! One function per command. Each returns a [`Report`] holding both the JSON
//! document and the CSV table; the global `--format` picks one.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use tl_entangle::connectome::{
    classify as classify_connectome, distinct_classes, enumerate_connectomes, representative_state, Classification,
    Connectome,
};
use tl_entangle::entanglement::{
    conversion_probability, entanglement_entropy, local_ranks, replica_check, schmidt_coefficients, schmidt_rank,
    slocc_tripartite_class, three_tangle, RANK_TOL,
};
use tl_entangle::ring::NumericAlgebra;
use tl_entangle::state_space::{amplitudes, party_name, spaces_for, DiagramState, PartyKind, PartyLayout, QuditSpace};
use tl_entangle::su2::{highest_weight_vectors, Spin, SpinSystem};
use tl_entangle::tangle::{kauffman_bracket, reduce};
use tl_entangle::{Algebra, EvalPoint, Mode, NumericElement, Tensor};

use crate::dsl::{parse_tangle, TangleDocument};
use crate::output::{cell, complex, num, render_json, Table};
use crate::scan;
use crate::{Backend, CliError, Command, ConnectomeCommand, Format, RepCommand, Settings};

/// Amplitudes below this fraction of the largest are not listed.
pub const LIST_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub table: Table,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => render_json(&self.json),
            Format::Csv => self.table.render(),
        }
    }
}

pub fn dispatch(cmd: &Command, s: &Settings) -> Result<Report, CliError> {
    match cmd {
        Command::Bracket { file } => bracket(&load(file)?, s),
        Command::Reduce { file } => reduce_cmd(&load(file)?, s),
        Command::State { file } => state(&load(file)?, s),
        Command::Classify { file } => classify(&load(file)?, s),
        Command::Entropy { file, party } => entropy(&load(file)?, party, s),
        Command::Tangle3 { file } => tangle3(&load(file)?, s),
        Command::ScanTangle3 { file, theta_min, theta_max, steps } => {
            scan_tangle3(&load(file)?, *theta_min, *theta_max, *steps, s)
        }
        Command::Connectome { action } => match action {
            ConnectomeCommand::Enumerate { parties, punctures } => connectome_enumerate(*parties, *punctures),
            ConnectomeCommand::Classify { connectome } => connectome_classify(&read_connectome(connectome)?),
            ConnectomeCommand::State { connectome } => connectome_state(&read_connectome(connectome)?, s),
        },
        Command::Rep { action } => match action {
            RepCommand::Hw { spins } => rep_hw(spins, s),
        },
    }
}

pub fn load(path: &str) -> Result<TangleDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {}", path, e)))?;
    parse_tangle(&text).map_err(|e| CliError::parse(format!("{}:{}", path, e)))
}

fn evaluation(p: &EvalPoint) -> Value {
    json!({
        "theta": num(p.theta),
        "theta_over_pi": num(p.theta / PI),
        "d": num(p.d()),
        "k": p.level,
    })
}

fn header(command: &str, doc: &TangleDocument) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(command));
    m.insert("document".into(), json!(doc.name));
    m.insert("crossing_mode".into(), json!(doc.mode.to_string()));
    m
}

fn bracket(doc: &TangleDocument, s: &Settings) -> Result<Report, CliError> {
    let mut out = header("bracket", doc);
    let word = doc.word();
    let mut table;
    match s.backend {
        Backend::Exact => {
            let v = kauffman_bracket(&word, &Algebra::exact(doc.mode))?;
            out.insert("backend".into(), json!("exact"));
            out.insert("value".into(), json!(v.to_string()));
            table = Table::new(&["value"]);
            table.push(vec![v.to_string()]);
            if let Some(p) = s.point {
                let z = v.evaluate(&p)?;
                out.insert("evaluation".into(), evaluation(&p));
                out.insert("numeric".into(), complex(z));
            }
        }
        Backend::Numeric => {
            let p = s.point()?;
            let z = kauffman_bracket(&word, &Algebra::numeric(doc.mode, &p))?;
            out.insert("backend".into(), json!("numeric"));
            out.insert("evaluation".into(), evaluation(&p));
            out.insert("value".into(), complex(z));
            table = Table::new(&["theta", "re", "im"]);
            table.push(vec![cell(p.theta), cell(z.re), cell(z.im)]);
        }
    }
    Ok(Report { json: Value::Object(out), table })
}

fn reduce_cmd(doc: &TangleDocument, s: &Settings) -> Result<Report, CliError> {
    let mut out = header("reduce", doc);
    let word = doc.word();
    out.insert("top".into(), json!(doc.top));
    out.insert("bottom".into(), json!(doc.bottom));
    let (terms, table) = match s.backend {
        Backend::Exact => {
            let el = reduce(&word, &Algebra::exact(doc.mode))?;
            out.insert("backend".into(), json!("exact"));
            let mut table = Table::new(&["diagram", "coeff"]);
            let terms: Vec<Value> = el
                .terms()
                .map(|(d, c)| {
                    table.push(vec![d.to_string(), c.to_string()]);
                    json!({ "diagram": d.to_string(), "coeff": c.to_string() })
                })
                .collect();
            (terms, table)
        }
        Backend::Numeric => {
            let p = s.point()?;
            let el = reduce(&word, &Algebra::numeric(doc.mode, &p))?;
            out.insert("backend".into(), json!("numeric"));
            out.insert("evaluation".into(), evaluation(&p));
            let top = el.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max);
            let mut table = Table::new(&["diagram", "re", "im"]);
            let terms: Vec<Value> = el
                .terms()
                .filter(|(_, c)| c.norm() > LIST_FLOOR * top)
                .map(|(d, c)| {
                    table.push(vec![d.to_string(), cell(c.re), cell(c.im)]);
                    json!({ "diagram": d.to_string(), "coeff": complex(*c) })
                })
                .collect();
            (terms, table)
        }
    };
    out.insert("terms".into(), Value::Array(terms));
    Ok(Report { json: Value::Object(out), table })
}

/// A numeric diagram state with its frames.
pub struct Evaluated {
    pub state: DiagramState,
    pub spaces: Vec<QuditSpace>,
    pub alg: NumericAlgebra,
    pub amplitudes: Tensor,
}

pub fn evaluate_element(
    element: NumericElement,
    layout: PartyLayout,
    alg: NumericAlgebra,
) -> Result<Evaluated, CliError> {
    let state = DiagramState::new(element, layout)?;
    let spaces = spaces_for(&state.layout, &alg)?;
    let amplitudes = amplitudes(&state, &spaces, &alg)?;
    Ok(Evaluated { state, spaces, alg, amplitudes })
}

pub fn evaluate_document(doc: &TangleDocument, p: &EvalPoint) -> Result<Evaluated, CliError> {
    let layout = doc.layout().ok_or_else(|| CliError::parse("the document declares no parties"))?;
    let alg = Algebra::numeric(doc.mode, p);
    let element = reduce(&doc.word(), &alg)?;
    evaluate_element(element, layout, alg)
}

fn parties_json(layout: &PartyLayout) -> Value {
    Value::Array(
        layout
            .parties()
            .iter()
            .map(|p| {
                let kind = match p.kind {
                    PartyKind::Punctured { .. } => "punctured",
                    PartyKind::Plain { .. } => "plain",
                };
                json!({
                    "name": p.name,
                    "first": p.start + 1,
                    "last": p.start + p.len(),
                    "dim": p.dim(),
                    "kind": kind,
                })
            })
            .collect(),
    )
}

fn amplitude_listing(t: &Tensor, layout: &PartyLayout) -> (Value, Table) {
    let top = t.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut cols: Vec<&str> = layout.parties().iter().map(|p| p.name.as_str()).collect();
    cols.extend(["re", "im"]);
    let mut table = Table::new(&cols);
    let mut list = Vec::new();
    for (off, z) in t.data().iter().enumerate() {
        if z.norm() <= LIST_FLOOR * top {
            continue;
        }
        let idx = t.index_of(off);
        let mut row: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
        row.extend([cell(z.re), cell(z.im)]);
        table.push(row);
        list.push(json!({ "index": idx, "re": num(z.re), "im": num(z.im) }));
    }
    (Value::Array(list), table)
}

fn state_json(out: &mut Map<String, Value>, ev: &Evaluated) -> Table {
    let layout = &ev.state.layout;
    let (list, table) = amplitude_listing(&ev.amplitudes, layout);
    out.insert("parties".into(), parties_json(layout));
    out.insert("shape".into(), json!(ev.amplitudes.shape()));
    out.insert("norm".into(), num(ev.amplitudes.norm()));
    out.insert("amplitudes".into(), list);
    table
}

fn state(doc: &TangleDocument, s: &Settings) -> Result<Report, CliError> {
    let p = s.numeric_only("state")?;
    let ev = evaluate_document(doc, &p)?;
    let mut out = header("state", doc);
    out.insert("evaluation".into(), evaluation(&p));
    let table = state_json(&mut out, &ev);
    Ok(Report { json: Value::Object(out), table })
}

/// Finest partition of the parties into factors of the state.
pub fn factor_blocks(t: &Tensor) -> Result<Vec<Vec<usize>>, CliError> {
    let m = t.rank();
    let full: u32 = (1u32 << m) - 1;
    let mut split = vec![full];
    for mask in 1..full {
        let keep: Vec<usize> = (0..m).filter(|a| mask & (1 << a) != 0).collect();
        if schmidt_rank(t, &keep, RANK_TOL)? == 1 {
            split.push(mask);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..m {
        if blocks.iter().any(|b| b.contains(&i)) {
            continue;
        }
        let mask = split.iter().filter(|&&s| s & (1 << i) != 0).fold(full, |acc, &s| acc & s);
        blocks.push((0..m).filter(|a| mask & (1 << a) != 0).collect());
    }
    Ok(blocks)
}

fn summary(blocks: &[Vec<usize>]) -> &'static str {
    if blocks.iter().all(|b| b.len() == 1) {
        "separable"
    } else if blocks.len() == 1 {
        "genuine"
    } else {
        "biseparable"
    }
}

fn names(layout: &PartyLayout, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&i| layout.parties()[i].name.clone()).collect()
}

fn connectome_json(c: &Connectome) -> Value {
    let punct: Value = match c.uniform_punctures() {
        Some(p) => json!(p),
        None => json!(c.punctures()),
    };
    json!({ "parties": c.parties(), "punctures": punct, "adj": c.adj() })
}

fn classification_json(cl: &Classification, label: &dyn Fn(usize) -> String) -> Value {
    json!({
        "summary": cl.summary(),
        "reduced": connectome_json(&cl.reduced),
        "blocks": cl.blocks.iter().map(|(b, k)| json!({
            "parties": b.iter().map(|&i| label(i)).collect::<Vec<_>>(),
            "kind": k.to_string(),
        })).collect::<Vec<_>>(),
    })
}

/// Entanglement structure of an evaluated state, as JSON fields and a
/// per-party table.
fn structure(out: &mut Map<String, Value>, ev: &Evaluated, tol: f64) -> Result<Table, CliError> {
    let t = &ev.amplitudes;
    let layout = &ev.state.layout;
    let ranks = local_ranks(t, RANK_TOL)?;
    let blocks = factor_blocks(t)?;
    let class = summary(&blocks);
    out.insert("local_ranks".into(), json!(ranks));
    out.insert("blocks".into(), json!(blocks.iter().map(|b| names(layout, b)).collect::<Vec<_>>()));
    out.insert("class".into(), json!(class));
    if t.shape() == [2, 2, 2] {
        out.insert("slocc".into(), json!(slocc_tripartite_class(t, RANK_TOL, tol)?.to_string()));
        out.insert("tangle3".into(), num(three_tangle(t)?));
    }
    if t.rank() == 2 {
        out.insert("schmidt_rank".into(), json!(ranks[0]));
    }
    let mut table = Table::new(&["party", "local_rank", "block", "class"]);
    for (i, p) in layout.parties().iter().enumerate() {
        let b = blocks.iter().position(|b| b.contains(&i)).expect("every party is in a block");
        table.push(vec![p.name.clone(), ranks[i].to_string(), (b + 1).to_string(), class.to_string()]);
    }
    Ok(table)
}

fn classify(doc: &TangleDocument, s: &Settings) -> Result<Report, CliError> {
    let p = s.numeric_only("classify")?;
    let ev = evaluate_document(doc, &p)?;
    let mut out = header("classify", doc);
    out.insert("evaluation".into(), evaluation(&p));
    let table = structure(&mut out, &ev, s.tol)?;
    let layout = &ev.state.layout;
    let diagrams: Vec<_> = ev.state.element.terms().collect();
    if let [(d, _)] = diagrams.as_slice() {
        let c = Connectome::from_pairing(&d.bottom_involution(), layout)?;
        let label = |i: usize| layout.parties()[i].name.clone();
        out.insert("connectome".into(), connectome_json(&c));
        out.insert("connectome_class".into(), classification_json(&classify_connectome(&c), &label));
    }
    Ok(Report { json: Value::Object(out), table })
}

fn entropy(doc: &TangleDocument, party: &str, s: &Settings) -> Result<Report, CliError> {
    let p = s.numeric_only("entropy")?;
    let ev = evaluate_document(doc, &p)?;
    let layout = &ev.state.layout;
    let mut keep = Vec::new();
    for name in party.split(',').map(str::trim) {
        let i = layout.index(name).ok_or_else(|| CliError::usage(format!("no party named '{}'", name)))?;
        if keep.contains(&i) {
            return Err(CliError::usage(format!("party '{}' listed twice", name)));
        }
        keep.push(i);
    }
    let t = &ev.amplitudes;
    let h = entanglement_entropy(t, &keep)?;
    let sv = schmidt_coefficients(t, &keep)?;
    let total: f64 = sv.iter().map(|x| x * x).sum();
    let probs: Vec<f64> = sv.iter().map(|x| x * x / total).collect();
    let mut out = header("entropy", doc);
    out.insert("evaluation".into(), evaluation(&p));
    out.insert("party".into(), json!(names(layout, &keep)));
    out.insert("entropy".into(), num(h));
    out.insert("entropy_bits".into(), num(h / std::f64::consts::LN_2));
    out.insert("schmidt_probabilities".into(), Value::Array(probs.iter().map(|&x| num(x)).collect()));
    out.insert("schmidt_rank".into(), json!(schmidt_rank(t, &keep, RANK_TOL)?));
    let mut table = Table::new(&["quantity", "value"]);
    table.push(vec!["entropy".into(), cell(h)]);
    let mut replica = Vec::new();
    for n in [2u32, 3] {
        let (numeric, diagrammatic) = replica_check(&ev.state, &ev.spaces, &ev.alg, &keep, n)?;
        table.push(vec![format!("tr_rho{}_numeric", n), cell(numeric)]);
        table.push(vec![format!("tr_rho{}_diagrammatic", n), cell(diagrammatic)]);
        replica.push(json!({ "n": n, "numeric": num(numeric), "diagrammatic": num(diagrammatic) }));
    }
    out.insert("replica".into(), Value::Array(replica));
    if t.shape() == [2, 2] {
        let c = conversion_probability(t)?;
        out.insert("conversion_probability".into(), num(c));
        table.push(vec!["conversion_probability".into(), cell(c)]);
    }
    Ok(Report { json: Value::Object(out), table })
}

fn tangle3(doc: &TangleDocument, s: &Settings) -> Result<Report, CliError> {
    let p = s.numeric_only("tangle3")?;
    let ev = evaluate_document(doc, &p)?;
    let t = &ev.amplitudes;
    let tau = three_tangle(t)?;
    let class = slocc_tripartite_class(t, RANK_TOL, s.tol)?;
    let mut out = header("tangle3", doc);
    out.insert("evaluation".into(), evaluation(&p));
    out.insert("tangle3".into(), num(tau));
    out.insert("local_ranks".into(), json!(local_ranks(t, RANK_TOL)?));
    out.insert("slocc".into(), json!(class.to_string()));
    let mut table = Table::new(&["theta", "tangle3", "slocc"]);
    table.push(vec![cell(p.theta), cell(tau), class.to_string()]);
    Ok(Report { json: Value::Object(out), table })
}

/// `τ₃` at one angle, or `None` where the state is undefined there.
pub fn tangle_at(doc: &TangleDocument, theta: f64) -> Option<f64> {
    let ev = evaluate_document(doc, &EvalPoint::from_theta(theta)).ok()?;
    three_tangle(&ev.amplitudes).ok()
}

fn scan_tangle3(doc: &TangleDocument, lo: f64, hi: f64, steps: usize, s: &Settings) -> Result<Report, CliError> {
    if s.backend == Backend::Exact {
        return Err(CliError::usage("scan-tangle3 is numeric only"));
    }
    if steps == 0 || hi <= lo {
        return Err(CliError::usage("need --theta-min < --theta-max and --steps ≥ 1"));
    }
    let layout = doc.layout().ok_or_else(|| CliError::parse("the document declares no parties"))?;
    if layout.dims() != [2, 2, 2] {
        return Err(CliError::parse(format!("scan-tangle3 needs three qubit parties, got dims {:?}", layout.dims())));
    }
    let pool = scan::thread_pool().map_err(CliError::usage)?;
    let f = |th: f64| tangle_at(doc, th);
    let (samples, minima) = pool.install(|| {
        let samples = scan::sample(&f, &scan::grid(lo, hi, steps));
        let minima = scan::refine_minima(&f, &samples, 1e-9);
        (samples, minima)
    });
    let mut table = Table::new(&["kind", "theta", "theta_over_pi", "tangle3", "local_ranks"]);
    let rows: Vec<Value> = samples
        .iter()
        .map(|p| {
            table.push(vec![
                "grid".into(),
                cell(p.theta),
                cell(p.theta / PI),
                p.value.map(cell).unwrap_or_default(),
                String::new(),
            ]);
            json!({ "theta": num(p.theta), "theta_over_pi": num(p.theta / PI), "tangle3": p.value.map(num) })
        })
        .collect();
    let mut zeros = Vec::new();
    for m in minima.iter().filter(|m| m.value < s.tol) {
        let (theta, tau) = (m.theta, m.value);
        let ev = evaluate_document(doc, &EvalPoint::from_theta(theta))?;
        let ranks = local_ranks(&ev.amplitudes, RANK_TOL)?;
        let class = slocc_tripartite_class(&ev.amplitudes, RANK_TOL, s.tol)?;
        let kind = if m.at_domain_edge { "edge-zero" } else { "zero" };
        let r: Vec<String> = ranks.iter().map(|x| x.to_string()).collect();
        table.push(vec![kind.into(), cell(theta), cell(theta / PI), cell(tau), r.join(" ")]);
        zeros.push(json!({
            "theta": num(theta),
            "theta_over_pi": num(theta / PI),
            "tangle3": num(tau),
            "local_ranks": ranks,
            "slocc": class.to_string(),
            "at_domain_edge": m.at_domain_edge,
        }));
    }
    let mut out = header("scan-tangle3", doc);
    out.insert("theta_min".into(), num(lo));
    out.insert("theta_max".into(), num(hi));
    out.insert("steps".into(), json!(steps));
    out.insert("tol".into(), num(s.tol));
    out.insert("undefined_points".into(), json!(samples.iter().filter(|p| p.value.is_none()).count()));
    out.insert("rows".into(), Value::Array(rows));
    out.insert("minima_refined".into(), json!(minima.len()));
    out.insert("zeros".into(), Value::Array(zeros));
    Ok(Report { json: Value::Object(out), table })
}

fn adj_cell(adj: &[Vec<usize>]) -> String {
    adj.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect::<Vec<_>>().join(";")
}

fn connectome_enumerate(m: usize, punctures: usize) -> Result<Report, CliError> {
    if m == 0 {
        return Err(CliError::usage("--parties must be at least 1"));
    }
    let list = enumerate_connectomes(m, punctures)?;
    let classes = distinct_classes(&list);
    let label = |i: usize| party_name(i);
    let mut table = Table::new(&["index", "adj", "summary", "class", "reduced"]);
    let mut rows = Vec::new();
    for (i, c) in list.iter().enumerate() {
        let cl = classify_connectome(c);
        let canon = cl.reduced.canonical();
        let class = classes.iter().position(|k| *k == canon).expect("class list covers the enumeration") + 1;
        table.push(vec![
            (i + 1).to_string(),
            adj_cell(c.adj()),
            cl.summary().into(),
            class.to_string(),
            adj_cell(cl.reduced.adj()),
        ]);
        rows.push(json!({
            "index": i + 1,
            "connectome": connectome_json(c),
            "class": class,
            "classification": classification_json(&cl, &label),
        }));
    }
    let class_rows: Vec<Value> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let cl = classify_connectome(c);
            json!({ "index": i + 1, "connectome": connectome_json(c), "summary": cl.summary(), "shape": cl.shape() })
        })
        .collect();
    let out = json!({
        "command": "connectome enumerate",
        "parties": m,
        "punctures": punctures,
        "count": list.len(),
        "connectomes": rows,
        "class_count": classes.len(),
        "nonbiseparable": classes.iter().filter(|c| classify_connectome(c).summary() == "genuine").count(),
        "classes": class_rows,
    });
    Ok(Report { json: out, table })
}

/// A connectome from inline JSON or a JSON file: either the adjacency array
/// or `{"parties": m, "punctures": p, "adj": [[…]]}`.
pub fn read_connectome(arg: &str) -> Result<Connectome, CliError> {
    let text = if arg.trim_start().starts_with(['[', '{']) {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::usage(format!("cannot read {}: {}", arg, e)))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::parse(format!("connectome JSON: {}", e)))?;
    let adj_v = match &v {
        Value::Object(o) => o.get("adj").cloned().ok_or_else(|| CliError::parse("connectome JSON has no \"adj\""))?,
        other => other.clone(),
    };
    let adj: Vec<Vec<usize>> = serde_json::from_value(adj_v)
        .map_err(|e| CliError::parse(format!("\"adj\" must be a matrix of counts: {}", e)))?;
    let c = Connectome::new(adj)?;
    if let Value::Object(o) = &v {
        if let Some(m) = o.get("parties") {
            if m.as_u64() != Some(c.parties() as u64) {
                return Err(CliError::parse(format!("\"parties\" is {} but adj has {} rows", m, c.parties())));
            }
        }
        if let Some(p) = o.get("punctures") {
            let ok = match p {
                Value::Array(_) => serde_json::from_value::<Vec<usize>>(p.clone()).ok() == Some(c.punctures()),
                _ => p.as_u64().map(|x| x as usize) == c.uniform_punctures(),
            };
            if !ok {
                return Err(CliError::parse(format!(
                    "\"punctures\" {} disagrees with the row sums {:?}",
                    p,
                    c.punctures()
                )));
            }
        }
    }
    Ok(c)
}

fn connectome_classify(c: &Connectome) -> Result<Report, CliError> {
    let cl = classify_connectome(c);
    let label = |i: usize| party_name(i);
    let mut table = Table::new(&["party", "block", "kind"]);
    for (b, (members, kind)) in cl.blocks.iter().enumerate() {
        for &i in members {
            table.push(vec![party_name(i), (b + 1).to_string(), kind.to_string()]);
        }
    }
    let out = json!({
        "command": "connectome classify",
        "connectome": connectome_json(c),
        "classification": classification_json(&cl, &label),
    });
    Ok(Report { json: out, table })
}

fn connectome_state(c: &Connectome, s: &Settings) -> Result<Report, CliError> {
    let p = s.numeric_only("connectome state")?;
    let alg = Algebra::numeric(Mode::Kauffman, &p);
    let (element, layout) = representative_state(c, &alg)?;
    let ev = evaluate_element(element, layout, alg)?;
    let mut out = Map::new();
    out.insert("command".into(), json!("connectome state"));
    out.insert("connectome".into(), connectome_json(c));
    out.insert("evaluation".into(), evaluation(&p));
    let table = state_json(&mut out, &ev);
    let mut extra = Map::new();
    structure(&mut extra, &ev, s.tol)?;
    out.extend(extra);
    Ok(Report { json: Value::Object(out), table })
}

fn rep_hw(spins: &str, s: &Settings) -> Result<Report, CliError> {
    let list: Vec<Spin> = spins
        .split(',')
        .map(|x| x.parse::<Spin>().map_err(|e| CliError::usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    if list.len() > 6 || list.iter().map(Spin::dim).product::<usize>() > 4096 {
        return Err(CliError::usage("product space too large (at most 6 spins and dimension 4096)"));
    }
    let sys = SpinSystem::new(list.clone())?;
    let mut table = Table::new(&["total", "multiplicity", "index", "value"]);
    let mut rows = Vec::new();
    for h in highest_weight_vectors(&sys) {
        let t = h.tensor(&sys);
        let mut comps = Vec::new();
        for (off, &x) in h.vector.iter().enumerate() {
            if x.abs() <= LIST_FLOOR {
                continue;
            }
            let idx = t.index_of(off);
            let label: String = idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
            table.push(vec![h.total.to_string(), h.multiplicity.to_string(), label, cell(x)]);
            comps.push(json!({ "index": idx, "value": num(x) }));
        }
        let mut row = Map::new();
        row.insert("total".into(), json!(h.total.to_string()));
        row.insert("multiplicity".into(), json!(h.multiplicity));
        row.insert("components".into(), Value::Array(comps));
        if list.len() >= 2 {
            row.insert("local_ranks".into(), json!(local_ranks(&t, RANK_TOL)?));
        }
        if list.len() == 2 {
            row.insert("rank".into(), json!(schmidt_rank(&t, &[0], RANK_TOL)?));
        }
        if sys.dims() == [2, 2, 2] {
            row.insert("slocc".into(), json!(slocc_tripartite_class(&t, RANK_TOL, s.tol)?.to_string()));
        }
        rows.push(Value::Object(row));
    }
    let out = json!({
        "command": "rep hw",
        "spins": list.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "basis": "each factor runs from m = j down to m = -j",
        "vectors": rows,
    });
    Ok(Report { json: out, table })
}
