use std::io::Write;

use rayon::prelude::*;
use serde_json::{json, Value};

use stabtilt_core::charge::check_rigid;
use stabtilt_core::coxeter::{cartan_data, defect, wild_spectrum, ModuleClassifier};
use stabtilt_core::oracle::{stable_dimension_vectors, Representation};
use stabtilt_core::tilting::{detect_accumulation, limit_rays, run_both, run_mutation, MutationRun};
use stabtilt_core::{
    AccumulationReport, CentralCharge, Direction, Error, KClass, Quiver, QuiverType, RootType,
};

use crate::{DirectionArg, Failure, Format, Outcome};

fn line(out: &mut dyn Write, v: &Value) -> Outcome {
    writeln!(out, "{v}")?;
    Ok(())
}

fn with_field(mut v: Value, key: &str, extra: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert(key.to_string(), extra);
    }
    v
}

pub fn info(q: &Quiver, out: &mut dyn Write) -> Outcome {
    let cd = cartan_data(q)?;
    let ty = q.classify_type();
    let mut v = json!({
        "quiver": serde_json::from_str::<Value>(&q.to_json()).expect("valid JSON"),
        "type": ty,
        "euler": cd.euler,
        "cartan": cd.cartan,
        "coxeter": cd.coxeter,
    });
    match ty {
        QuiverType::Dynkin => {}
        QuiverType::Euclidean => v = with_field(v, "delta", json!(q.radical_delta()?)),
        QuiverType::Wild => {
            let ws = wild_spectrum(q)?;
            v = with_field(v, "rho", json!(ws.rho));
            v = with_field(v, "y_plus", json!(ws.y_plus));
            v = with_field(v, "y_minus", json!(ws.y_minus));
        }
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"))?;
    Ok(())
}

fn termination_value(run: &MutationRun) -> Value {
    let v = serde_json::to_value(&run.termination).expect("serializable");
    let v = with_field(v, "direction", json!(run.direction));
    with_field(v, "records", json!(run.records.len()))
}

fn accumulation_value(run: &MutationRun, report: &AccumulationReport) -> Value {
    let v = serde_json::to_value(report).expect("serializable");
    with_field(v, "direction", json!(run.direction))
}

fn write_csv(runs: &[&MutationRun], out: &mut dyn Write) -> Outcome {
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["step", "direction", "class", "phase", "q", "ar_class"])?;
        for run in runs {
            for r in &run.records {
                w.write_record([
                    r.step.to_string(),
                    r.direction.to_string(),
                    r.class.to_string(),
                    r.phase.to_string(),
                    r.q_value.to_string(),
                    r.classification.as_str().to_string(),
                ])?;
            }
        }
        w.flush()?;
    }
    for run in runs {
        writeln!(out, "# termination {}", termination_value(run))?;
    }
    Ok(())
}

pub fn stables(
    q: &Quiver,
    z: &CentralCharge,
    direction: DirectionArg,
    max_steps: usize,
    stop_gap: Option<f64>,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let rays = limit_rays(q)?;
    let (runs, reports, annotation) = match direction {
        DirectionArg::Both => {
            let b = run_both(q, z, max_steps, stop_gap)?;
            let annotation = serde_json::to_value(&b.annotation).expect("serializable");
            (vec![b.ccw, b.cw], vec![b.ccw_accumulation, b.cw_accumulation], Some(annotation))
        }
        one => {
            let dir = if one == DirectionArg::Ccw { Direction::Ccw } else { Direction::Cw };
            let run = run_mutation(q, z, dir, max_steps, stop_gap)?;
            let report = detect_accumulation(&run.records, &run.termination, z, &rays);
            (vec![run], vec![report], None)
        }
    };
    match format {
        Format::Json => {
            for run in &runs {
                for r in &run.records {
                    line(out, &r.to_json())?;
                }
                line(out, &termination_value(run))?;
            }
            for (run, report) in runs.iter().zip(&reports) {
                line(out, &accumulation_value(run, report))?;
            }
            if let Some(a) = annotation {
                line(out, &json!({ "annotation": a }))?;
            }
        }
        Format::Csv => {
            let refs: Vec<&MutationRun> = runs.iter().collect();
            write_csv(&refs, out)?;
            for (run, report) in runs.iter().zip(&reports) {
                writeln!(out, "# accumulation {}", accumulation_value(run, report))?;
            }
            if let Some(a) = annotation {
                writeln!(out, "# annotation {a}")?;
            }
        }
    }
    Ok(())
}

pub fn classify(q: &Quiver, class: &KClass, out: &mut dyn Write) -> Outcome {
    if class.len() != q.vertex_count() {
        return Err(Error::DimensionMismatch { expected: q.vertex_count(), got: class.len() }.into());
    }
    if !class.is_positive() {
        return Err(Error::InvalidClass(class.clone()).into());
    }
    let ty = q.classify_type();
    let root = match q.root_type(class)? {
        RootType::Real => "real",
        RootType::Imaginary => "imaginary",
        RootType::None => "none",
    };
    let ar_class = match ModuleClassifier::new(q)?.classify(class) {
        Ok(c) => json!(c),
        Err(Error::NotApplicable) => Value::Null,
        Err(Error::Inconclusive(_)) => json!("unknown"),
        Err(e) => return Err(e.into()),
    };
    let mut v = json!({
        "class": class,
        "type": ty,
        "q": q.tits_form(class)?.to_string().parse::<Value>().expect("integer"),
        "root_type": root,
        "ar_class": ar_class,
    });
    if ty == QuiverType::Euclidean {
        let d = defect(q, class)?;
        v = with_field(v, "defect", d.to_string().parse::<Value>().expect("integer"));
    }
    line(out, &v)
}

pub fn rigidity(
    q: &Quiver,
    z: &CentralCharge,
    max_steps: usize,
    stop_gap: Option<f64>,
    out: &mut dyn Write,
) -> Outcome {
    let b = run_both(q, z, max_steps, stop_gap)?;
    let classes: Vec<KClass> =
        b.ccw.records.iter().chain(&b.cw.records).map(|r| r.class.clone()).collect();
    let delta = match q.classify_type() {
        QuiverType::Euclidean => Some(q.radical_delta()?),
        _ => None,
    };
    let report = check_rigid(q, z, &classes, delta.as_ref())?;
    line(out, &serde_json::to_value(&report).expect("serializable"))
}

pub fn oracle_rep(rep: &Representation, z: Option<&CentralCharge>, out: &mut dyn Write) -> Outcome {
    let hom = rep.hom_dim(rep)?;
    let ext = rep.ext_dim(rep)?;
    let mut v = json!({
        "p": rep.field_size(),
        "dims": rep.dims(),
        "hom_self": hom,
        "ext_self": ext,
        "brick": hom == 1,
        "exceptional": rep.is_exceptional(),
    });
    if let Some(z) = z {
        let hn: Vec<Value> = rep
            .hn_filtration(z)?
            .into_iter()
            .map(|f| json!({ "class": f.class, "phase": f.phase_key.phase() }))
            .collect();
        v = with_field(v, "stable", json!(rep.is_stable(z)?));
        v = with_field(v, "stable_over_prime_field", json!(rep.is_stable_over_prime_field(z)?));
        v = with_field(v, "semistable", json!(rep.is_semistable(z)?));
        v = with_field(v, "hn", json!(hn));
    }
    line(out, &v)
}

pub fn oracle_box(
    q: &Quiver,
    z: &CentralCharge,
    primes: &[u32],
    bounds: &[usize],
    out: &mut dyn Write,
) -> Outcome {
    let found = stable_dimension_vectors(q, z, primes, bounds)?;
    line(out, &json!({ "primes": primes, "box": bounds, "stable_dimension_vectors": found }))
}

struct Sample {
    index: usize,
    value: [String; 2],
    result: Result<MutationRun, Error>,
}

pub fn sweep(
    q: &Quiver,
    charges: &[CentralCharge],
    vertex: usize,
    direction: Direction,
    first: usize,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let samples: Vec<Sample> = charges
        .par_iter()
        .enumerate()
        .map(|(index, z)| {
            let v = &z.values()[vertex];
            Sample {
                index,
                value: [v.re.to_string(), v.im.to_string()],
                result: run_mutation(q, z, direction, first, None),
            }
        })
        .collect();
    // ties are expected on walls; anything else aborts the sweep
    for s in &samples {
        if let Err(e) = &s.result {
            if !matches!(e, Error::PhaseTie(..)) {
                return Err(Failure::Core(e.clone()));
            }
        }
    }
    match format {
        Format::Json => {
            for s in &samples {
                let v = match &s.result {
                    Ok(run) => {
                        let mut v = serde_json::to_value(&run.termination).expect("serializable");
                        v = with_field(v, "sample", json!(s.index));
                        v = with_field(v, "value", json!(s.value));
                        v = with_field(v, "classes", json!(run.records.iter().map(|r| &r.class).collect::<Vec<_>>()));
                        with_field(v, "phases", json!(run.records.iter().map(|r| r.phase).collect::<Vec<_>>()))
                    }
                    Err(e) => json!({ "sample": s.index, "value": s.value, "error": e.to_string() }),
                };
                line(out, &v)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["sample", "re", "im", "step", "class", "phase"])?;
            for s in &samples {
                let Ok(run) = &s.result else { continue };
                for r in &run.records {
                    w.write_record([
                        s.index.to_string(),
                        s.value[0].clone(),
                        s.value[1].clone(),
                        r.step.to_string(),
                        r.class.to_string(),
                        r.phase.to_string(),
                    ])?;
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}

