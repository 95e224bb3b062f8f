use std::io::Write;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches, Command};
use entcert::lab::{self, Settings};
use entcert::Error;

fn opt(name: &'static str, value: &'static str, help: &'static str) -> Arg {
    Arg::new(name).long(name).value_name(value).help(help)
}

fn common(cmd: Command) -> Command {
    cmd.arg(opt("seed", "INT", "64-bit seed for all randomness"))
        .arg(opt("config", "PATH", "key=value file; flags override it"))
        .arg(opt(
            "output",
            "PATH",
            "write here instead of standard output",
        ))
}

fn family_args(cmd: Command) -> Command {
    cmd.arg(opt("family", "NAME", "uniform, mixture or zeta"))
        .arg(opt(
            "d",
            "INT",
            "uniform support, or first mixture block [10]",
        ))
        .arg(opt("big-d", "INT", "second mixture block [1000]"))
        .arg(opt("p", "PROB", "mass of the first mixture block [0.95]"))
        .arg(opt("q", "REAL", "zeta exponent [2]"))
}

fn cli() -> Command {
    Command::new("entcert")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Plug-in entropy estimates with finite-sample error certificates")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(common(
            Command::new("estimate")
                .about("Certify the plug-in entropy of a sample or count file")
                .arg(opt("input", "PATH", "sample or count file"))
                .arg(opt(
                    "format",
                    "FORMAT",
                    "samples (one symbol per line) or counts (symbol<TAB>count)",
                ))
                .arg(opt("alpha", "REAL", "moment order, 1 < alpha <= 64"))
                .arg(opt(
                    "h",
                    "REAL",
                    "assumed bound on the alpha-th information moment",
                ))
                .arg(opt("delta", "PROB", "failure probability [0.05]"))
                .arg(opt(
                    "alpha-grid",
                    "LIST",
                    "comma-separated orders; the smallest radius wins",
                ))
                .arg(opt(
                    "h-table",
                    "LIST",
                    "per-order bounds alpha=h,alpha=h,...",
                ))
                .arg(opt(
                    "h-from-support",
                    "K",
                    "use the largest moment of any distribution on K symbols as h",
                )),
        ))
        .subcommand(common(family_args(
            Command::new("rates")
                .about("Expected-error rate curves as CSV")
                .arg(opt("bounds", "LIST", "any of our,wy,ct"))
                .arg(opt(
                    "n-grid",
                    "START:STOP:POINTS",
                    "sample sizes [100:10000000:26]",
                ))
                .arg(
                    Arg::new("linear")
                        .long("linear")
                        .action(ArgAction::SetTrue)
                        .help("equal steps instead of equal ratios"),
                )
                .arg(opt("wy-c", "REAL", "constant of the WY curve, > 1 [2]")),
        )))
        .subcommand(common(family_args(
            Command::new("coverage")
                .about("Monte-Carlo coverage of the certificate")
                .arg(opt("n", "INT", "sample size [1000]"))
                .arg(opt("alpha", "REAL", "moment order [2]"))
                .arg(opt("delta", "PROB", "failure probability [0.1]"))
                .arg(opt("trials", "INT", "number of trials [500]")),
        )))
        .subcommand(common(
            Command::new("maxent")
                .about("Largest information moment on K symbols, with its envelope")
                .arg(opt(
                    "k-list",
                    "LIST",
                    "support sizes, e.g. 2..64 or 2,3,8 [2..64]",
                ))
                .arg(opt("alpha-list", "LIST", "moment orders [1,1.5,2,3]")),
        ))
        .subcommand(common(
            Command::new("lowerbound")
                .about("Lower-bound constructions")
                .arg(opt("kind", "KIND", "noemp or minimax"))
                .arg(opt("h", "REAL", "class level for noemp, > 1"))
                .arg(opt("n", "INT", "sample size"))
                .arg(opt("alpha", "REAL", "moment order for minimax")),
        ))
}

fn settings_from(matches: &ArgMatches) -> Result<Settings, Error> {
    let mut settings = match matches.get_one::<String>("config") {
        Some(path) => Settings::load(path)?,
        None => Settings::new(),
    };
    let mut flags = Settings::new();
    for id in matches.ids() {
        let id = id.as_str();
        if id == "config"
            || matches.value_source(id) != Some(clap::parser::ValueSource::CommandLine)
        {
            continue;
        }
        if let Ok(Some(&on)) = matches.try_get_one::<bool>(id) {
            flags.set(id, on.to_string());
        } else if let Some(v) = matches.get_one::<String>(id) {
            flags.set(id, v.clone());
        }
    }
    settings.overlay(&flags);
    Ok(settings)
}

fn execute(name: &str, matches: &ArgMatches) -> Result<(), Error> {
    let settings = settings_from(matches)?;
    let text = lab::run(name, &settings)?;
    match settings.raw("output") {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = Error::Usage(e.render().to_string().trim().to_string());
            println!("{}", lab::error_json(&err));
            return ExitCode::from(2);
        }
    };
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    match execute(name, sub) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            println!("{}", lab::error_json(&err));
            ExitCode::from(lab::exit_code(&err) as u8)
        }
    }
}
