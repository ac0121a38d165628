use clap::Parser;
use pseudogap_lab::{run, Invocation};

fn main() {
    let inv = Invocation::parse();
    match run(&inv) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
        }
        Err(e) => {
            eprintln!("pseudogap-lab: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
