use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use algostat::calibration::{self, FORMAT_VERSION};
use algostat::constructions::{
    antistochastic, antistochastic_witnesses, default_thresholds, hereditary_check,
    improve_sequence, shape_report, theorem3_bundle, theorem3_string, trace_csv, witness_profile,
    Bundle, HereditaryParams, MssParams,
};
use algostat::enumeration::cache;
use algostat::enumeration::TableOptions;
use algostat::models::{
    profile, restricted_profile, strong_profile, AllSetsFragment, CylinderFamily, ModelFamily,
    ProfileHeader, SingletonFamily,
};
use algostat::suites::{run_suite, SUITES};
use algostat::universal::group_dump;
use algostat::{
    build_table, omega_ledger, Bitstring, Calibration, HaltingTable, LabError, MachineConfig,
    ModelSet, Profile,
};

use crate::manifest::RunManifest;
use crate::plot::plot_profiles;
use crate::{Cli, CliError, Command, Context, Global, MssArgs, ProfileArgs};

/// Environment variable naming a directory for default cache files.
pub const CACHE_DIR_ENV: &str = "ALGOSTAT_CACHE_DIR";

struct Run<'a> {
    global: &'a Global,
    config: MachineConfig,
    argv: Vec<String>,
    outputs: Vec<PathBuf>,
}

impl Run<'_> {
    fn cache_path(&self) -> Option<PathBuf> {
        if let Some(p) = &self.global.cache {
            return Some(p.clone());
        }
        let dir = std::env::var_os(CACHE_DIR_ENV)?;
        let c = &self.config;
        Some(Path::new(&dir).join(format!(
            "{}-L{}-T{}-N{}.cache",
            c.machine_id, c.max_prog_len, c.step_budget, c.cond_universe
        )))
    }

    /// Loads the cache when one exists for this run, otherwise builds the
    /// table (and saves it when a cache path is configured). A cache whose
    /// header disagrees with the active config is refused.
    fn table(&self) -> Result<HaltingTable, CliError> {
        match self.cache_path() {
            Some(path) if path.exists() => {
                cache::load(&path, &self.config, TableOptions::default()).op("cache load")
            }
            Some(path) => {
                let t = build_table(&self.config, &[]).op("build_table")?;
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)
                        .map_err(LabError::from)
                        .op("cache save")?;
                }
                cache::save(&t, &path).op("cache save")?;
                Ok(t)
            }
            None => build_table(&self.config, &[]).op("build_table"),
        }
    }

    fn write(&mut self, name: &str, content: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.global.out)
            .map_err(LabError::from)
            .op("write")?;
        let path = self.global.out.join(name);
        fs::write(&path, content)
            .map_err(LabError::from)
            .op("write")?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    fn finish(mut self, name: &str) -> Result<(), CliError> {
        if self.outputs.is_empty() {
            return Ok(());
        }
        let manifest = RunManifest {
            config: self.config.clone(),
            command: self.argv.clone(),
            outputs: self.outputs.clone(),
            calibration_version: FORMAT_VERSION,
        };
        let path = self.write(&format!("manifest-{name}.txt"), &manifest.render())?;
        println!("manifest: {}", path.display());
        Ok(())
    }
}

fn parse_bits(op: &'static str, s: &str) -> Result<Bitstring, CliError> {
    s.parse::<Bitstring>().map_err(|e| CliError::Usage {
        op,
        detail: format!("{s:?} is not a bit string ({e})"),
    })
}

fn file_tag(x: &Bitstring) -> String {
    if x.is_empty() {
        "empty".into()
    } else {
        x.to_text()
    }
}

fn calibration_for(
    op: &'static str,
    config: &MachineConfig,
    file: Option<&Path>,
) -> Result<Calibration, CliError> {
    let Some(file) = file else {
        return Calibration::for_config(config).op(op);
    };
    let text = fs::read_to_string(file).map_err(LabError::from).op(op)?;
    let c = Calibration::parse(&text).op(op)?;
    if !c.matches(config) {
        return Err(CliError::Lab {
            op,
            source: LabError::Calibration(format!(
                "{} was measured under a different configuration than {}",
                file.display(),
                config.describe()
            )),
        });
    }
    Ok(c)
}

fn mss_params(
    op: &'static str,
    args: &MssArgs,
    cal: Option<&Calibration>,
) -> Result<MssParams, CliError> {
    let from_cal = |key: &str| -> Result<f64, CliError> {
        match cal {
            Some(c) => c.get_f64(key).op(op),
            None => Err(CliError::Usage {
                op,
                detail: format!(
                    "no calibration for this configuration; pass the {key} threshold explicitly"
                ),
            }),
        }
    };
    Ok(MssParams {
        delta: match args.delta {
            Some(d) => d,
            None => from_cal("t3_delta")? as u32,
        },
        epsilon: match args.mss_epsilon {
            Some(e) => e,
            None => from_cal("t3_epsilon")?,
        },
        d: match args.d {
            Some(d) => d,
            None => from_cal("t3_d")?,
        },
    })
}

fn header(
    config: &MachineConfig,
    kind: &str,
    x: &Bitstring,
    epsilon: Option<u32>,
    family: Option<String>,
    m_max: u32,
) -> ProfileHeader {
    ProfileHeader {
        config: config.clone(),
        kind: kind.into(),
        x: x.to_text(),
        epsilon,
        family,
        m_max,
    }
}

fn emit_profile(
    run: &mut Run,
    kind: &str,
    args: &ProfileArgs,
    x: &Bitstring,
    p: &Profile,
    epsilon: Option<u32>,
    family: Option<String>,
) -> Result<(), CliError> {
    let m_max = args.m_max.unwrap_or(run.config.max_prog_len);
    let h = header(&run.config, kind, x, epsilon, family, m_max);
    let csv = p.to_csv(&h);
    print!("{csv}");
    let stem = format!("{kind}-{}", file_tag(x));
    run.write(&format!("{stem}.csv"), &csv)?;
    if args.plot {
        let svg = plot_profiles(&[(format!("{kind} {}", x.to_text()), p.clone())], &stem);
        run.write(&format!("{stem}.svg"), &svg)?;
    }
    Ok(())
}

fn check_m_max(op: &'static str, m: Option<u32>, config: &MachineConfig) -> Result<u32, CliError> {
    let l = config.max_prog_len;
    match m {
        Some(m) if m > l => Err(CliError::Usage {
            op,
            detail: format!("m-max {m} exceeds the maximal program length {l}"),
        }),
        Some(m) => Ok(m),
        None => Ok(l),
    }
}

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<(), CliError> {
    let g = &cli.global;
    let config = MachineConfig::new(g.max_prog_len, g.steps, g.cond_universe).op("config")?;
    let mut run = Run {
        global: g,
        config,
        argv,
        outputs: Vec::new(),
    };
    let name = match &cli.command {
        Command::BuildCache => {
            let path = run
                .cache_path()
                .unwrap_or_else(|| g.out.join("table.cache"));
            let t = build_table(&run.config, &[]).op("build_table")?;
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)
                    .map_err(LabError::from)
                    .op("cache save")?;
            }
            cache::save(&t, &path).op("cache save")?;
            println!("{}", run.config.describe());
            println!(
                "programs={} outputs={}",
                t.program_count(),
                t.outputs().len()
            );
            println!("cache: {}", path.display());
            run.outputs.push(path);
            "build-cache"
        }
        Command::Complexity { x } => {
            let x = parse_bits("complexity", x)?;
            let t = run.table()?;
            println!("{}", t.complexity(&x));
            "complexity"
        }
        Command::Ct { x, y, total } => {
            let x = parse_bits("ct", x)?;
            let y = parse_bits("ct", y)?;
            let t = run.table()?;
            let l = run.config.max_prog_len;
            let c = if *total {
                t.total_cond_complexity_upto(&y, &x, l)
                    .op("total_cond_complexity")?
            } else {
                t.cond_complexity_upto(&y, &x, l).op("cond_complexity")?
            };
            println!("{c}");
            "ct"
        }
        Command::Omega { m } => {
            let m = check_m_max("omega", Some(*m), &run.config)?;
            let t = run.table()?;
            let ledger = omega_ledger(&t, m);
            for i in 0..=m {
                println!("Omega_{i}={}", ledger.omega(i));
            }
            run.write(&format!("ledger-m{m}.csv"), &ledger.to_csv())?;
            "omega"
        }
        Command::Groups { m } => {
            let m = check_m_max("groups", Some(*m), &run.config)?;
            let t = run.table()?;
            let ledger = omega_ledger(&t, m);
            let dump = group_dump(&ledger, m).op("universal_groups")?;
            print!("{dump}");
            run.write(&format!("groups-m{m}.csv"), &dump)?;
            "groups"
        }
        Command::Profile(args) => {
            let x = parse_bits("profile", &args.x)?;
            let m_max = check_m_max("profile", args.m_max, &run.config)?;
            let t = run.table()?;
            let p = profile(&t, &x, m_max);
            emit_profile(&mut run, "profile", args, &x, &p, None, None)?;
            "profile"
        }
        Command::StrongProfile { common, epsilon } => {
            let x = parse_bits("strong_profile", &common.x)?;
            let m_max = check_m_max("strong_profile", common.m_max, &run.config)?;
            let eps = if epsilon == "inf" {
                None
            } else {
                Some(epsilon.parse::<u32>().map_err(|_| CliError::Usage {
                    op: "strong_profile",
                    detail: format!("epsilon {epsilon:?} is neither a length nor `inf`"),
                })?)
            };
            let t = run.table()?;
            let p = strong_profile(&t, &x, eps, m_max).op("strong_profile")?;
            emit_profile(&mut run, "strong-profile", common, &x, &p, eps, None)?;
            "strong-profile"
        }
        Command::RestrictedProfile { common, family } => {
            let x = parse_bits("restricted_profile", &common.x)?;
            let m_max = check_m_max("restricted_profile", common.m_max, &run.config)?;
            let fam: Box<dyn ModelFamily> = match family.as_str() {
                "cylinders" => Box::new(CylinderFamily),
                "singletons" => Box::new(SingletonFamily),
                "all-sets" => Box::new(AllSetsFragment::default()),
                other => {
                    return Err(CliError::Usage {
                        op: "restricted_profile",
                        detail: format!(
                            "unknown family {other:?} (cylinders, singletons, all-sets)"
                        ),
                    })
                }
            };
            let t = run.table()?;
            let p = restricted_profile(&t, &x, fam.as_ref(), m_max);
            emit_profile(
                &mut run,
                "restricted-profile",
                common,
                &x,
                &p,
                None,
                Some(fam.name()),
            )?;
            "restricted-profile"
        }
        Command::Antistochastic { n, k } => {
            let t = run.table()?;
            let l = run.config.max_prog_len;
            let x = antistochastic(&t, *n, *k).op("antistochastic")?;
            let shape = shape_report(&t, &x, *k as u32, l);
            let eps_cyl = calibration::cylinder_overhead(&t, &x).op("cylinder_overhead")?;
            let w = antistochastic_witnesses(&t, &x, *k).op("antistochastic_witnesses")?;
            let wp = witness_profile(&w, eps_cyl.unwrap_or(i64::from(l)) as u32);
            let opt = |v: Option<u32>| v.map_or("inf".to_string(), |v| v.to_string());
            let mut report = String::new();
            let _ = writeln!(report, "x={}", x.to_text());
            let _ = writeln!(report, "n={n}\nk={k}");
            let _ = writeln!(
                report,
                "antistochastic_epsilon={}",
                shape.antistochastic_epsilon
            );
            let _ = writeln!(
                report,
                "distance_to_l_shape={}",
                opt(shape.distance_to_target)
            );
            let _ = writeln!(
                report,
                "cylinder_overhead={}",
                eps_cyl.map_or("inf".into(), |v| v.to_string())
            );
            let _ = writeln!(
                report,
                "witness_gap={}",
                opt(shape.profile.excess_over(&wp))
            );
            print!("{report}");
            let tag = format!("antistochastic-n{n}-k{k}");
            run.write(&format!("{tag}.txt"), &report)?;
            let h = header(&run.config, "profile", &x, None, None, l);
            run.write(&format!("{tag}-profile.csv"), &shape.profile.to_csv(&h))?;
            "antistochastic"
        }
        Command::Theorem3 { k, mss } => {
            let cal = Calibration::for_config(&run.config).ok();
            let params = mss_params("theorem3", mss, cal.as_ref())?;
            let t = run.table()?;
            let l = run.config.max_prog_len;
            let s = theorem3_string(&t, *k).op("theorem3_string")?;
            let ledger = omega_ledger(&t, l);
            let b = theorem3_bundle(&t, &ledger, s, params).op("theorem3_bundle")?;
            let x = b.string.x.clone();
            let eps = b.strength.finite();
            let p = profile(&t, &x, l);
            let sp = strong_profile(&t, &x, eps, l).op("strong_profile")?;
            let mut bundle =
                Bundle::create(&g.out.join(format!("theorem3-k{k}")), &run.config).op("bundle")?;
            let constants = theorem3_constants(&b);
            for (k, v) in &constants {
                println!("{k}={v}");
            }
            bundle.write_constants(&constants).op("bundle")?;
            bundle
                .write_profile(
                    "profile.csv",
                    &p,
                    &header(&run.config, "profile", &x, None, None, l),
                )
                .op("bundle")?;
            bundle
                .write_profile(
                    "strong-profile.csv",
                    &sp,
                    &header(&run.config, "strong-profile", &x, eps, None, l),
                )
                .op("bundle")?;
            bundle
                .write_text("group-sweep.csv", &group_sweep_csv(&b))
                .op("bundle")?;
            let svg = plot_profiles(
                &[
                    ("profile".into(), p),
                    (format!("strong profile (eps={})", b.strength), sp),
                ],
                &format!("theorem3 k={k}"),
            );
            bundle.write_text("overlay.svg", &svg).op("bundle")?;
            run.outputs.extend(bundle.artifacts().iter().cloned());
            "theorem3"
        }
        Command::Improve {
            x,
            prefix,
            set,
            epsilon,
            alpha,
            theta,
            cap,
        } => {
            let x = parse_bits("improve", x)?;
            let t = run.table()?;
            let l = run.config.max_prog_len;
            let a = match (prefix, set) {
                (Some(u), _) => {
                    let u = parse_bits("improve", u)?;
                    if !x.starts_with(&u) {
                        return Err(CliError::Usage {
                            op: "improve",
                            detail: format!("prefix {} does not start x", u.to_text()),
                        });
                    }
                    ModelSet::cylinder(&t, &u, x.len())
                }
                (None, Some(list)) => {
                    let elems = list
                        .split(',')
                        .map(|e| parse_bits("improve", e.trim()))
                        .collect::<Result<Vec<_>, _>>()?;
                    ModelSet::new(&t, elems)
                }
                (None, None) => ModelSet::cube(&t, x.len()),
            };
            if !a.contains(&x) {
                return Err(CliError::Usage {
                    op: "improve",
                    detail: "the model does not contain x".into(),
                });
            }
            let (dt, da) = default_thresholds(x.len());
            let eps = match epsilon {
                Some(e) => *e,
                None => Calibration::for_config(&run.config)
                    .and_then(|c| c.get_u32("eps_cylinder"))
                    .unwrap_or(l),
            };
            let ledger = omega_ledger(&t, l);
            let trace = improve_sequence(
                &t,
                &ledger,
                &x,
                &a,
                eps,
                alpha.unwrap_or(da),
                theta.unwrap_or(dt),
                *cap,
            )
            .op("improve_sequence")?;
            let csv = trace_csv(&trace);
            print!("{csv}");
            println!(
                "stop_reason={:?} big_steps={}",
                trace.stop_reason, trace.big_steps
            );
            run.write(&format!("trace-{}.csv", file_tag(&x)), &csv)?;
            if !trace.complexities_decrease() || !trace.deficiency_within_bound() {
                return Err(CliError::Violation {
                    op: "improve_sequence",
                    detail: "trace breaks the decrease or deficiency law".into(),
                });
            }
            if let Some(b) = trace.iteration_bound() {
                if trace.big_steps as u64 > b {
                    return Err(CliError::Violation {
                        op: "improve_sequence",
                        detail: format!("{} big steps exceed the bound {b}", trace.big_steps),
                    });
                }
            }
            "improve"
        }
        Command::Hereditary {
            k,
            mss,
            halved_bound,
        } => {
            let cal = Calibration::for_config(&run.config).ok();
            let params = mss_params("hereditary", mss, cal.as_ref())?;
            let t = run.table()?;
            let l = run.config.max_prog_len;
            let s = theorem3_string(&t, *k).op("theorem3_string")?;
            let ledger = omega_ledger(&t, l);
            let strength = t
                .total_cond_complexity_upto(s.a.code(), &s.x, l)
                .op("total_cond_complexity")?;
            let eps_cyl = cal
                .as_ref()
                .and_then(|c| c.get_u32("eps_cylinder").ok())
                .unwrap_or(0);
            let (theta, alpha) = default_thresholds(s.x.len());
            let hp = HereditaryParams {
                mss: params,
                epsilon: strength.finite().unwrap_or(l).max(eps_cyl),
                alpha,
                theta,
                cap: 16,
            };
            let r = hereditary_check(&t, &ledger, &s.x, &s.a, hp).op("hereditary_check")?;
            let report = hereditary_text(&s.x, &r);
            print!("{report}");
            run.write(&format!("hereditary-k{k}.txt"), &report)?;
            let h = header(
                &run.config,
                "profile",
                &r.a1.a1.code().clone(),
                None,
                None,
                l,
            );
            run.write(
                &format!("hereditary-k{k}-profile-a1.csv"),
                &r.profile_a1.to_csv(&h),
            )?;
            if !r.stage_bounds_hold(*halved_bound) {
                run.finish("hereditary")?;
                return Err(CliError::Violation {
                    op: "hereditary_check",
                    detail: format!(
                        "a stage bound fails ({} H bound)",
                        if *halved_bound {
                            "halved"
                        } else {
                            "disjointness"
                        }
                    ),
                });
            }
            "hereditary"
        }
        Command::Verify {
            suite,
            n,
            calibration,
        } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(CliError::Usage {
                    op: "verify",
                    detail: format!(
                        "unknown suite {suite:?} (expected all, {})",
                        SUITES.join(", ")
                    ),
                });
            };
            let cal = calibration_for("verify", &run.config, calibration.as_deref())?;
            let t = run.table()?;
            let ledger = omega_ledger(&t, run.config.max_prog_len);
            let mut failed = Vec::new();
            let mut text = String::new();
            for name in names {
                let r = run_suite(name, &t, &ledger, &cal, *n).op("verify")?;
                println!("{r}");
                let _ = writeln!(text, "{r}");
                for v in r.violations.iter().take(20) {
                    println!("  {v}");
                    let _ = writeln!(text, "  {v}");
                }
                if !r.passed() {
                    failed.push(name);
                }
            }
            run.write(&format!("verify-{suite}-n{n}.txt"), &text)?;
            if !failed.is_empty() {
                run.finish("verify")?;
                return Err(CliError::Violation {
                    op: "verify",
                    detail: format!("suites failed: {}", failed.join(", ")),
                });
            }
            "verify"
        }
        Command::Plot {
            csvs,
            labels,
            name,
            title,
        } => {
            if !labels.is_empty() && labels.len() != csvs.len() {
                return Err(CliError::Usage {
                    op: "plot_profile",
                    detail: format!("{} labels for {} CSV files", labels.len(), csvs.len()),
                });
            }
            let mut profiles = Vec::new();
            for (i, path) in csvs.iter().enumerate() {
                let text = fs::read_to_string(path)
                    .map_err(LabError::from)
                    .op("plot_profile")?;
                let p = Profile::from_csv(&text).ok_or_else(|| CliError::Lab {
                    op: "plot_profile",
                    source: LabError::Format(format!("{} is not a profile CSV", path.display())),
                })?;
                let label = labels.get(i).cloned().unwrap_or_else(|| {
                    path.file_stem().map_or_else(
                        || format!("profile {i}"),
                        |s| s.to_string_lossy().into_owned(),
                    )
                });
                profiles.push((label, p));
            }
            let path = run.write(name, &plot_profiles(&profiles, title))?;
            println!("{}", path.display());
            "plot"
        }
        Command::Calibrate { write } => {
            let t = run.table()?;
            let ledger = omega_ledger(&t, run.config.max_prog_len);
            let measured = calibration::measure(&t, &ledger).op("calibrate")?;
            print!("{}", measured.render());
            let frozen = Calibration::frozen();
            if frozen.matches(&run.config) {
                let diff = measured.diff(&frozen);
                if diff.is_empty() {
                    println!("# matches the built-in constants");
                }
                for (k, new, old) in diff {
                    println!(
                        "# differs: {k} measured={} built-in={}",
                        new.as_deref().unwrap_or("-"),
                        old.as_deref().unwrap_or("-")
                    );
                }
            }
            if let Some(path) = write {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)
                        .map_err(LabError::from)
                        .op("calibrate")?;
                }
                fs::write(path, measured.render())
                    .map_err(LabError::from)
                    .op("calibrate")?;
                run.outputs.push(path.clone());
            }
            "calibrate"
        }
    };
    run.finish(name)
}

fn theorem3_constants(b: &algostat::constructions::Theorem3Bundle) -> Vec<(String, String)> {
    let s = &b.string;
    let opt = |v: Option<f64>| v.map_or("inf".to_string(), |v| format!("{v:.4}"));
    vec![
        ("k".into(), s.k.to_string()),
        ("y".into(), s.y.to_text()),
        ("z".into(), s.z.to_text()),
        ("x".into(), s.x.to_text()),
        ("model_size".into(), s.a.cardinality().to_string()),
        ("c_z_given_y".into(), s.c_z_given_y.to_string()),
        ("c_x".into(), b.c_x.to_string()),
        ("c_y".into(), b.c_y.to_string()),
        ("c_model".into(), b.c_model.to_string()),
        ("model_strength".into(), b.strength.to_string()),
        ("model_deficiency".into(), opt(b.mss.sufficient.deficiency)),
        ("delta".into(), b.params.delta.to_string()),
        ("epsilon".into(), b.params.epsilon.to_string()),
        ("d".into(), b.params.d.to_string()),
        ("is_mss".into(), b.mss.holds().to_string()),
        ("models_scanned".into(), b.mss.models_scanned.to_string()),
        (
            "qualifying_groups".into(),
            b.qualifying().count().to_string(),
        ),
        ("reference_k_minus_log_k".into(), b.reference.to_string()),
        ("enumerator".into(), b.enumerator.to_string()),
    ]
}

fn group_sweep_csv(b: &algostat::constructions::Theorem3Bundle) -> String {
    let opt = |v: Option<f64>| v.map_or("inf".to_string(), |v| format!("{v:.4}"));
    let mut s = String::from(
        "m,s,complexity,within_ceiling,strength,deficiency,strong,sufficient,ct_given_model,epsilon_needed,delta_needed\n",
    );
    for g in &b.groups {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{}",
            g.m,
            g.s,
            g.complexity,
            g.within_ceiling,
            g.strength,
            opt(g.deficiency),
            g.strong,
            g.sufficient,
            g.ct_given_model,
            opt(g.epsilon_needed),
            g.delta_needed.map_or("inf".to_string(), |v| v.to_string()),
        );
    }
    s
}

fn hereditary_text(x: &Bitstring, r: &algostat::constructions::HereditaryReport) -> String {
    let gap = |g: Option<u32>| g.map_or("inf".to_string(), |v| v.to_string());
    let mut s = String::new();
    let _ = writeln!(s, "x={}", x.to_text());
    let _ = writeln!(s, "mss_holds={}", r.mss_holds);
    let _ = writeln!(s, "model_strength={}", r.strength);
    let _ = writeln!(s, "program={}", r.program.to_text());
    let _ = writeln!(s, "a1_size={}", r.a1.a1.cardinality());
    let _ = writeln!(s, "partition_classes={}", r.a1.partition.len());
    let _ = writeln!(s, "ct_a_given_a1={}", r.a1.ct_a_given_a1);
    let _ = writeln!(s, "ct_a1_given_a={}", r.a1.ct_a1_given_a);
    let _ = writeln!(s, "normality_gap_x={}", gap(r.x_gap.gap));
    let _ = writeln!(s, "normality_gap_a1={}", gap(r.gap_a1.gap));
    let _ = writeln!(s, "normality_gap_a={}", gap(r.gap_a.gap));
    for p in &r.points {
        let _ = writeln!(
            s,
            "point=({},{}) trivial_region={} lifted=({},{}) completed={}",
            p.point.0,
            p.point.1,
            p.trivial_region,
            p.lifted.0,
            p.lifted.1,
            p.completed()
        );
        if let Some(h) = &p.h {
            let _ = writeln!(
                s,
                "  h_size={} bucket={} a1_cap_m1={} m1_size={} halved_bound={} disjointness_bound={}",
                h.h.cardinality(),
                h.bucket,
                h.a1_cap_m1,
                h.m1_size,
                h.halved_bound_holds,
                h.disjointness_bound_holds
            );
        }
        if let Some(m) = &p.map {
            let _ = writeln!(
                s,
                "  d_size={} contains_code={} size_bound={} strength={}",
                m.d.cardinality(),
                m.contains_code,
                m.size_bound_holds,
                m.strength
            );
        }
        if let Some(f) = &p.failure {
            let _ = writeln!(s, "  stopped_at={:?} reason={}", f.stage, f.reason);
        }
    }
    let _ = writeln!(s, "halved_bound_holds={}", r.stage_bounds_hold(true));
    let _ = writeln!(s, "disjointness_bound_holds={}", r.stage_bounds_hold(false));
    s
}
