//! Plain-text views of the JSON reports, tab separated where tabular so they
//! paste into gnuplot or a spreadsheet.

use crate::commands::Outcome;
use newton_resolve::Error;
use serde_json::Value;
use std::fmt::Write;
use std::io::Read;
use std::path::Path;

fn load(path: &Path) -> Result<Value, Error> {
    let mut text = String::new();
    let io = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    io.map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
}

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn fits(out: &mut String, doc: &Value) {
    for f in doc["fits"].as_array().into_iter().flatten() {
        let fit = &f["fit"];
        let _ = writeln!(
            out,
            "fit\tslope {}\tlog power {}\ttarget {}\t{}\t{}",
            s(&fit["slope"]),
            s(&fit["log_power"]),
            s(&f["target"]["slope"]),
            s(&f["verdict"]),
            s(&f["note"])
        );
    }
}

pub fn render(path: &Path) -> Result<Outcome, Error> {
    let doc = load(path)?;
    let cmd = doc["command"].as_str().ok_or_else(|| Error::InvalidConfig("not a newton-resolve report".into()))?;
    let mut out = String::new();
    let _ = writeln!(out, "# {cmd}: {}", s(&doc["input"]["parsed"]));
    match cmd {
        "analyze" => {
            let p = &doc["result"]["prediction"];
            let _ = writeln!(out, "d\t{}\nk\t{}\ncase\t{}\ns\t{}\ndelta\t{}", s(&doc["d"]), s(&doc["k"]), s(&doc["case"]), s(&p["s"]), s(&p["delta"]));
            let _ = writeln!(out, "face\tdim\tzero_order\tcentral\tface_polynomial");
            for f in doc["result"]["faces"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    s(&f["index"]),
                    s(&f["dim"]),
                    s(&f["zero_order"]["o"]),
                    s(&f["in_central_face"]),
                    s(&f["face_polynomial"])
                );
            }
        }
        "charts" => {
            let _ = writeln!(out, "chart\tface\tratios\tequalities\tcertificate");
            let checks = doc["report"]["checks"].as_array().cloned().unwrap_or_default();
            for (ch, c) in doc["atlas"]["charts"].as_array().into_iter().flatten().zip(&checks) {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    s(&c["chart"]),
                    s(&ch["face"]),
                    s(&c["distance"]["ratios"]),
                    s(&c["distance"]["equality_count"]),
                    s(&c["certificate"]["passed"])
                );
            }
        }
        "resolve" => {
            let r = &doc["report"];
            let _ = writeln!(
                out,
                "leaves\t{}/{}\nheight\t{}\npartial\t{}\norders decrease\t{}\nfirst failure\t{}",
                s(&r["leaves_passed"]),
                s(&r["leaves"]),
                s(&r["tree_height"]),
                s(&doc["partial"]),
                s(&r["orders_decrease"]),
                s(&r["first_failure"])
            );
        }
        "verify padic" => {
            let _ = writeln!(out, "l\tN_l");
            let series = &doc["series"];
            for (l, v) in series["levels"].as_array().into_iter().flatten().zip(series["n_l"].as_array().into_iter().flatten()) {
                let _ = writeln!(out, "{}\t{}", s(l), s(v));
            }
            fits(&mut out, &doc);
        }
        "verify real" | "verify complex" => {
            let _ = writeln!(out, "eps\tvolume\tstderr");
            for r in doc["table"]["rows"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "{}\t{}\t{}", s(&r["eps"]), s(&r["volume"]), s(&r["stderr"]));
            }
            fits(&mut out, &doc);
        }
        "verify osc" => {
            let _ = writeln!(out, "lambda\tabs\tres");
            for r in doc["rows"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "{}\t{}\t{}", s(&r["lambda"]), s(&r["abs"]), s(&r["res"]));
            }
            fits(&mut out, &doc);
        }
        other => return Err(Error::InvalidConfig(format!("unknown report kind {other}"))),
    }
    if let Some(v) = doc["verdict"].as_str() {
        let _ = writeln!(out, "verdict\t{v}");
    }
    Ok(Outcome { body: out, passed: doc["verdict"].as_str() != Some("FAIL") })
}
