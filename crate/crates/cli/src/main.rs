use clap::Parser;

mod formats;
mod run;

fn main() {
    let config = run::RunConfig::parse();
    match run::run(config) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}
