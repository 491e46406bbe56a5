//! Command-line front end: presentation files, commands and reports.

pub mod examples;
pub mod model;
pub mod parse;
pub mod run;

use std::panic::{self, AssertUnwindSafe};

use lietop_core::limits::{set_max_terms, TermLimitExceeded};

pub use run::{Cli, Outcome};

/// Reads `LIETOP_MAX_TERMS` into the term cap.
pub fn apply_env_limit() -> Result<(), String> {
    match std::env::var("LIETOP_MAX_TERMS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("LIETOP_MAX_TERMS: not a number: '{v}'"))?;
            set_max_terms(n);
            Ok(())
        }
        Err(_) => Ok(()),
    }
}

/// Installs a panic hook that stays quiet for the term cap, which
/// `execute` reports as an input error.
pub fn install_panic_hook() {
    let default = panic::take_hook();
    panic::set_hook(Box::new(move |info| {
        if info.payload().downcast_ref::<TermLimitExceeded>().is_none() {
            default(info);
        }
    }));
}

/// Runs one invocation. Input errors, including an exceeded term cap,
/// come back as exit status 2 with the message as output.
pub fn execute(cli: &Cli) -> Outcome {
    match panic::catch_unwind(AssertUnwindSafe(|| run::run(cli))) {
        Ok(Ok(out)) => out,
        Ok(Err(e)) => Outcome {
            output: format!("error: {e}\n"),
            code: 2,
        },
        Err(payload) => match payload.downcast::<TermLimitExceeded>() {
            Ok(t) => Outcome {
                output: format!("error: {t}\n"),
                code: 2,
            },
            Err(other) => panic::resume_unwind(other),
        },
    }
}
