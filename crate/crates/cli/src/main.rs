//! Command line front end: classify recognizers, inspect algebras and
//! piece relations, run the semantic refuters, and generate piece-language
//! recognizers.
//!
//! Exit codes for `classify`: 0 when all requested properties hold, 1 when
//! any fails, 3 when any is unknown, 2 on input errors. `piece` exits 0 or
//! 1 with the verdict, 2 on parse errors.

use clap::{Parser, Subcommand};
use forestalg::algebra::io::{load_recognizer, save_automaton, RecognizerSource};
use forestalg::caps::Caps;
use forestalg::decide::{decide, Holds, Prepared, Property, Verdict};
use forestalg::forest::Alphabet;
use forestalg::oracle;
use forestalg::parse::parse_forest;
use forestalg::piecerel;
use forestalg::pieces::{self, PieceVariant};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "forestalg",
    version,
    about = "Decision procedures for piecewise testable forest and tree languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the language of a recognizer file.
    Classify {
        file: PathBuf,
        #[arg(long)]
        pt: bool,
        #[arg(long)]
        pt_alt: bool,
        #[arg(long)]
        cca: bool,
        #[arg(long)]
        cca_alt: bool,
        #[arg(long)]
        sigma1: bool,
        #[arg(long)]
        commutative: bool,
        #[arg(long)]
        comm_pt: bool,
        #[arg(long)]
        comm_cca: bool,
        #[arg(long)]
        tree_pt: bool,
        #[arg(long)]
        tree_cca: bool,
        #[arg(long)]
        horizontal: bool,
        /// Context size bound for the horizontal under-approximation.
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Search small realizing forests and contexts for witnesses.
        #[arg(long)]
        emit_witness: bool,
        #[arg(long)]
        emit_provenance: bool,
        #[arg(long)]
        json: bool,
    },
    /// Report the syntactic algebra of a recognizer file.
    Algebra {
        file: PathBuf,
        /// Also list the idempotent power of every element.
        #[arg(long)]
        omega: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the first forest is a piece of the second.
    Piece {
        s: String,
        t: String,
        /// Comma-separated labels, e.g. `a,b,c`.
        #[arg(long)]
        alphabet: String,
        #[arg(long, default_value = "plain")]
        variant: String,
        /// Print an embedding and a deletion sequence.
        #[arg(long)]
        witness: bool,
    },
    /// Enumerate the pieces of a forest up to a size bound.
    Pieces {
        t: String,
        #[arg(long)]
        alphabet: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, default_value = "plain")]
        variant: String,
    },
    /// Dump the piece relation of the syntactic algebra of a recognizer.
    Piecerel {
        file: PathBuf,
        #[arg(long, default_value = "plain")]
        variant: String,
        /// Context size bound (horizontal variant only).
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Print the rule derivation of every pair.
        #[arg(long)]
        trace: bool,
    },
    /// Run a semantic refuter against a recognizer.
    Oracle {
        file: PathBuf,
        /// `refute-pt` or `refute-sigma1`.
        kind: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        #[arg(long, default_value = "plain")]
        variant: String,
    },
    /// Generate the piece-set recognizer of a piece language.
    Gen {
        #[arg(long)]
        alphabet: String,
        /// The target piece, e.g. `a(b)`.
        #[arg(long)]
        target: String,
        /// Piece size bound; at least the size of the target.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "plain")]
        variant: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_alphabet(spec: &str) -> anyhow::Result<Alphabet> {
    Ok(Alphabet::new(
        spec.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from),
    )?)
}

fn parse_variant(s: &str) -> anyhow::Result<PieceVariant> {
    PieceVariant::parse(s).ok_or_else(|| {
        anyhow::anyhow!(
            "unknown variant `{s}` (expected plain, cca, horizontal, commutative, commutative-cca)"
        )
    })
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let caps = Caps::from_env();
    match cli.command {
        Command::Classify {
            file,
            pt,
            pt_alt,
            cca,
            cca_alt,
            sigma1,
            commutative,
            comm_pt,
            comm_cca,
            tree_pt,
            tree_cca,
            horizontal,
            bound,
            emit_witness,
            emit_provenance,
            json,
        } => {
            let flags = [
                (pt, Property::Pt),
                (pt_alt, Property::PtAlt),
                (cca, Property::CcaPt),
                (cca_alt, Property::CcaPtAlt),
                (sigma1, Property::Sigma1),
                (commutative, Property::Commutative),
                (comm_pt, Property::CommPt),
                (comm_cca, Property::CommCcaPt),
                (tree_pt, Property::TreePt),
                (tree_cca, Property::TreeCcaPt),
                (horizontal, Property::HorizontalPt),
            ];
            let requested: Vec<Property> = flags
                .iter()
                .filter(|(on, _)| *on)
                .map(|(_, p)| *p)
                .collect();
            if requested.is_empty() {
                anyhow::bail!("no properties requested; pass at least one of --pt --pt-alt --cca --cca-alt --sigma1 --commutative --comm-pt --comm-cca --tree-pt --tree-cca --horizontal");
            }
            let source = load_recognizer(&file)?;
            let prepared = Prepared::from_source(&source, &caps)?;
            let mut verdicts: Vec<Verdict> = Vec::new();
            for property in requested {
                let mut verdict = decide(&prepared, property, bound, &caps)?;
                if emit_witness {
                    verdict.witness = verdict
                        .witness
                        .map(|w| w.with_realizations(&prepared.syn, 6));
                }
                verdicts.push(verdict);
            }
            if json {
                let out: Vec<serde_json::Value> = verdicts.iter().map(Verdict::to_json).collect();
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                for v in &verdicts {
                    print_verdict(v, emit_witness, emit_provenance);
                }
            }
            let code = if verdicts.iter().any(|v| v.holds == Holds::False) {
                1
            } else if verdicts.iter().any(|v| v.holds == Holds::Unknown) {
                3
            } else {
                0
            };
            Ok(code)
        }
        Command::Algebra { file, omega, json } => {
            let source = load_recognizer(&file)?;
            cmd_algebra(&source, omega, json, &caps)?;
            Ok(0)
        }
        Command::Piece {
            s,
            t,
            alphabet,
            variant,
            witness,
        } => {
            let ab = parse_alphabet(&alphabet)?;
            let variant = parse_variant(&variant)?;
            let s = parse_forest(&s, &ab)?;
            let t = parse_forest(&t, &ab)?;
            let found = pieces::is_piece_witness(&s, &t, variant, &caps)?;
            match &found {
                Some(embedding) => {
                    println!("piece ({})", variant.name());
                    if witness {
                        for (from, to) in &embedding.map {
                            println!("  {:?} -> {:?}", from.0, to.0);
                        }
                        if let Some(reordered) = &embedding.reordered_target {
                            println!("  into reordering \"{}\"", reordered.render(&ab));
                        }
                        if !matches!(
                            variant,
                            PieceVariant::Commutative | PieceVariant::CommutativeCca
                        ) {
                            if let Some(steps) = pieces::deletion_sequence(&s, &t, variant)? {
                                println!("  deletion sequence:");
                                for step in steps {
                                    println!(
                                        "    delete {:?} -> \"{}\"",
                                        step.node.0,
                                        step.result.render(&ab)
                                    );
                                }
                            }
                        }
                    }
                    Ok(0)
                }
                None => {
                    println!("not a piece ({})", variant.name());
                    Ok(1)
                }
            }
        }
        Command::Pieces {
            t,
            alphabet,
            max_size,
            variant,
        } => {
            let ab = parse_alphabet(&alphabet)?;
            let variant = parse_variant(&variant)?;
            let t = parse_forest(&t, &ab)?;
            let set = pieces::enumerate_pieces(&t, max_size, variant, &caps)?;
            let mut rendered: Vec<(usize, String)> =
                set.iter().map(|f| (f.size(), f.render(&ab))).collect();
            rendered.sort();
            println!(
                "{} {} pieces of size <= {}",
                rendered.len(),
                variant.name(),
                max_size
            );
            for (_, text) in rendered {
                println!("{}", if text.is_empty() { "0" } else { &text });
            }
            Ok(0)
        }
        Command::Piecerel {
            file,
            variant,
            bound,
            trace,
        } => {
            let source = load_recognizer(&file)?;
            let prepared = Prepared::from_source(&source, &caps)?;
            let variant = parse_variant(&variant)?;
            let rel = match variant {
                PieceVariant::Plain => piecerel::piece_relation_plain(&prepared.syn),
                PieceVariant::Cca => piecerel::piece_relation_cca(&prepared.syn, &prepared.classes),
                PieceVariant::Horizontal => {
                    piecerel::piece_relation_horizontal(&prepared.syn, bound, &caps)?
                }
                other => anyhow::bail!(
                    "piece relations are computed for plain, cca and horizontal, not {}",
                    other.name()
                ),
            };
            println!(
                "{} relation on the syntactic algebra (|V| = {}): {} pairs{}",
                variant.name(),
                prepared.syn.algebra().v_len(),
                rel.len(),
                if rel.under_approximation {
                    format!(
                        " (under-approximation at context size {})",
                        rel.bound.unwrap_or(0)
                    )
                } else {
                    String::new()
                }
            );
            for (i, (small, large)) in rel.pairs.iter().enumerate() {
                println!(
                    "{} <= {}",
                    prepared.syn.algebra().v_name(*small as usize),
                    prepared.syn.algebra().v_name(*large as usize)
                );
                if trace {
                    for line in rel.trace(i) {
                        println!("    {line}");
                    }
                }
            }
            Ok(0)
        }
        Command::Oracle {
            file,
            kind,
            n,
            max_size,
            variant,
        } => {
            let source = load_recognizer(&file)?;
            let rec = source.to_syntactic(&caps)?;
            let found = match kind.as_str() {
                "refute-pt" => {
                    let variant = parse_variant(&variant)?;
                    oracle::refute_pt(&rec, n, max_size, variant, &caps)?
                }
                "refute-sigma1" => oracle::refute_sigma1(&rec, max_size, &caps)?,
                other => anyhow::bail!(
                    "unknown oracle search `{other}` (expected refute-pt or refute-sigma1)"
                ),
            };
            match found {
                Some(refutation) => {
                    println!("refutation: {}", refutation.describe(rec.alphabet()));
                    let ok = refutation.verify(&rec, &caps)?;
                    println!("re-verified: {ok}");
                }
                None => println!("no refutation up to max-size {max_size}"),
            }
            Ok(0)
        }
        Command::Gen {
            alphabet,
            target,
            n,
            variant,
            out,
        } => {
            let ab = parse_alphabet(&alphabet)?;
            let variant = parse_variant(&variant)?;
            let target = parse_forest(&target, &ab)?;
            let auto = oracle::piece_algebra(&ab, n, variant, &target, &caps)?;
            save_automaton(&auto, &out)?;
            println!("wrote {} states to {}", auto.n_states(), out.display());
            Ok(0)
        }
    }
}

fn print_verdict(v: &Verdict, emit_witness: bool, emit_provenance: bool) {
    let status = match v.holds {
        Holds::True => "holds",
        Holds::False => "fails",
        Holds::Unknown => "unknown",
    };
    println!("{}: {}", v.property.name(), status);
    if let Some(w) = &v.witness {
        println!("  identity: {}", w.identity.equation());
        let bindings: Vec<String> = w
            .bindings
            .iter()
            .map(|(n, _, name)| format!("{n} = {name}"))
            .collect();
        println!("  where {}", bindings.join(", "));
        println!("  lhs = {}, rhs = {}", w.lhs.1, w.rhs.1);
        if emit_witness && !w.realizations.is_empty() {
            let real: Vec<String> = w
                .realizations
                .iter()
                .map(|(n, t)| format!("{n} = {t}"))
                .collect();
            println!("  realized: {}", real.join(", "));
        }
    }
    if emit_provenance {
        let p = &v.provenance;
        let mut line = format!(
            "  provenance: input |H|={}{}, syntactic |H|={} |V|={}",
            p.input_h,
            p.input_v.map(|v| format!(" |V|={v}")).unwrap_or_default(),
            p.syntactic_h,
            p.syntactic_v
        );
        if let (Some(h), Some(v)) = (p.reduced_h, p.reduced_v) {
            line.push_str(&format!(", reduced |H|={h} |V|={v}"));
        }
        if let Some(rel) = p.relation {
            line.push_str(&format!(", relation {rel}"));
            if let Some(n) = p.relation_pairs {
                line.push_str(&format!(" ({n} pairs)"));
            }
        }
        if let Some(b) = p.bound {
            line.push_str(&format!(", bound {b}"));
        }
        if p.under_approximation {
            line.push_str(", under-approximation");
        }
        println!("{line}");
        for note in &p.notes {
            println!("  note: {note}");
        }
    }
}

fn cmd_algebra(
    source: &RecognizerSource,
    omega: bool,
    json: bool,
    caps: &Caps,
) -> anyhow::Result<()> {
    let (input_h, input_v) = source.input_sizes();
    let rec = source.to_syntactic(caps)?;
    let a = rec.algebra();
    let classes = forestalg::algebra::classify::classify_elements(&rec.morphism);
    let j = a.j_report();
    let tree_types: Vec<&str> = (0..a.h_len())
        .filter(|&h| classes.tree_type[h])
        .map(|h| a.h_name(h))
        .collect();
    let tcts: Vec<&str> = (0..a.v_len())
        .filter(|&v| classes.tree_context_type[v])
        .map(|v| a.v_name(v))
        .collect();
    let accept: Vec<&str> = rec.accept.iter().map(|&h| a.h_name(h)).collect();
    if json {
        let mut obj = serde_json::json!({
            "input_h": input_h,
            "input_v": input_v,
            "syntactic_h": a.h_len(),
            "syntactic_v": a.v_len(),
            "j_trivial": j.j_trivial,
            "j_classes": j.class_count(),
            "tree_types": tree_types,
            "tree_context_types": tcts,
            "accept": accept,
        });
        if omega {
            obj["omega_v"] = serde_json::Value::Array(
                (0..a.v_len())
                    .map(|v| serde_json::json!({"element": a.v_name(v), "omega": a.v_name(a.idempotent_power_v(v))}))
                    .collect(),
            );
            obj["omega_h"] = serde_json::Value::Array(
                (0..a.h_len())
                    .map(|h| serde_json::json!({"element": a.h_name(h), "omega": a.h_name(a.idempotent_power_h(h))}))
                    .collect(),
            );
        }
        println!("{}", serde_json::to_string_pretty(&obj)?);
    } else {
        match input_v {
            Some(v) => println!("input: |H| = {input_h}, |V| = {v} (algebra file)"),
            None => println!("input: {input_h} states (automaton file)"),
        }
        println!("syntactic: |H| = {}, |V| = {}", a.h_len(), a.v_len());
        println!("J-trivial: {} ({} J-classes)", j.j_trivial, j.class_count());
        println!("tree-types: {}", tree_types.join(", "));
        println!("tree-context-types: {}", tcts.join(", "));
        println!("accept: {}", accept.join(", "));
        if omega {
            for v in 0..a.v_len() {
                println!(
                    "omega V: {} -> {}",
                    a.v_name(v),
                    a.v_name(a.idempotent_power_v(v))
                );
            }
            for h in 0..a.h_len() {
                println!(
                    "omega H: {} -> {}",
                    a.h_name(h),
                    a.h_name(a.idempotent_power_h(h))
                );
            }
        }
    }
    Ok(())
}
