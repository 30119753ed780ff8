use serde_json::Value;

use crate::Format;

/// JSON with object keys sorted at every level.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string_pretty(&sorted(v)).expect("serializable")
}

fn sorted(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            Value::Object(keys.into_iter().map(|k| (k.clone(), sorted(&m[k]))).collect())
        }
        Value::Array(a) => Value::Array(a.iter().map(sorted).collect()),
        other => other.clone(),
    }
}

pub fn render(format: Format, doc: &Value) -> String {
    match format {
        Format::Json => canonical(doc) + "\n",
        Format::Csv => csv(doc),
        Format::Human => human(doc),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Object(m) if m.contains_key("num") && m.contains_key("den") => ratio(v),
        other => other.to_string(),
    }
}

fn ratio(v: &Value) -> String {
    let num = v["num"].as_str().unwrap_or("?");
    match v["den"].as_str() {
        Some("1") | None => num.to_string(),
        Some(den) => format!("{num}/{den}"),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) if !(m.contains_key("num") && m.contains_key("den")) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for k in keys {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, &m[k], out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Array(a) => out.push((prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(" "))),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn csv(doc: &Value) -> String {
    const COLUMNS: [&str; 6] = ["q", "n", "ordinary", "lambda", "lambda_p", "lambda_s"];
    if let Some(rows) = doc["result"]["rows"].as_array() {
        let mut s = COLUMNS.join(",") + "\n";
        for r in rows {
            let line: Vec<String> = COLUMNS.iter().map(|c| quote(&scalar(&r[*c]))).collect();
            s += &(line.join(",") + "\n");
        }
        return s;
    }
    let mut pairs = Vec::new();
    flatten("result", &doc["result"], &mut pairs);
    flatten("verdicts", &doc["verdicts"], &mut pairs);
    let mut s = String::from("key,value\n");
    for (k, v) in pairs {
        s += &format!("{},{}\n", quote(&k), quote(&v));
    }
    s
}

fn verdict_lines(doc: &Value) -> String {
    let mut s = String::new();
    if let Some(m) = doc["verdicts"].as_object() {
        let mut keys: Vec<&String> = m.keys().collect();
        keys.sort();
        for k in keys {
            s += &format!("  {k}: {}\n", scalar(&m[k]));
        }
    }
    s
}

fn human(doc: &Value) -> String {
    let r = &doc["result"];
    let mut s = match doc["command"].as_str().unwrap_or("") {
        "volume" => {
            let mut s = format!(
                "vol V_{} = {} ≈ {:.4}\n",
                r["n"],
                ratio(&r["volume"]),
                r["approx"].as_str().unwrap_or("").trim_start_matches('≈').parse::<f64>().unwrap_or(f64::NAN)
            );
            if r["mc"].is_object() {
                s += &format!(
                    "Monte Carlo: {} ± {} ({} samples, seed {}, {:.2} sigma)\n",
                    r["mc"]["estimate"], r["mc"]["std_error"], r["mc"]["samples"], r["mc"]["seed"], r["mc"]["deviation_sigma"].as_f64().unwrap_or(f64::NAN)
                );
            }
            s
        }
        "count" if r["rows"].is_array() => {
            let mut s = String::new();
            for row in r["rows"].as_array().into_iter().flatten() {
                s += &count_line(row);
            }
            s
        }
        "count" => {
            let mut s = count_line(r);
            if r["divisor"].is_object() {
                s += &format!("Weil vectors with {} | a_n: {}\n", scalar(&r["divisor"]["d"]), scalar(&r["divisor"]["count"]));
            }
            if let Some(rep) = r["report"].as_object() {
                let mut keys: Vec<&String> = rep.keys().collect();
                keys.sort();
                for k in keys {
                    let v = &rep[k];
                    let shown = if v.is_object() { scalar(&v["approx"]) } else { scalar(v) };
                    s += &format!("  {k}: {shown}\n");
                }
            }
            s
        }
        "order" => format!(
            "a = {}\nf = {}\nf(1) = {}\nmethod: {}, certificate: {}{}\n",
            r["a"],
            scalar(&r["f"]),
            scalar(&r["f_at_1"]),
            scalar(&r["method"]),
            scalar(&r["certificate"]),
            if r["repaired"].as_bool() == Some(true) { ", repaired" } else { "" }
        ),
        "check" => {
            let ordinary = match r["ordinary"].as_bool() {
                Some(true) => "ordinary",
                Some(false) => "not ordinary",
                None => "ordinarity undefined",
            };
            let vertices: Vec<String> = r["newton_polygon"]["vertices"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|v| format!("({}, {})", v["x"], ratio(&v["y"])))
                .collect();
            format!(
                "f = {}\n{}, {}\nNewton polygon: {}\n",
                scalar(&r["f"]),
                if r["weil"].as_bool() == Some(true) { "Weil" } else { "not Weil" },
                ordinary,
                vertices.join(" ")
            )
        }
        "verify-bounds" => {
            let mut s = String::new();
            for b in r["batteries"].as_array().into_iter().flatten() {
                s += &format!(
                    "{}: {} trials, {} violations, worst ratio {}\n",
                    scalar(&b["name"]),
                    b["trials"],
                    b["violations"],
                    b["worst_ratio"]
                );
            }
            s
        }
        _ => canonical(r) + "\n",
    };
    let v = verdict_lines(doc);
    if !v.is_empty() {
        s += "verdicts:\n";
        s += &v;
    }
    s
}

fn count_line(r: &Value) -> String {
    format!(
        "q = {}, n = {}: #O = {}, #Lambda = {}, p | a_n: {}, s | a_n: {}\n",
        r["q"],
        r["n"],
        scalar(&r["ordinary"]),
        scalar(&r["lambda"]),
        scalar(&r["lambda_p"]),
        scalar(&r["lambda_s"])
    )
}
