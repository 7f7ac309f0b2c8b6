//! Command implementations behind the `deckforge` binary, and the HTTP
//! front end of the play service.

pub mod commands;
pub mod server;
