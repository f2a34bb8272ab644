#pragma once

namespace CLI {
class App;
}

namespace dirpose::cli {

// Each command registers its subcommand and flags; the returned callback
// runs after parsing.
void register_gen(CLI::App& app);
void register_fit(CLI::App& app);
void register_pipeline(CLI::App& app);
void register_viz(CLI::App& app);

}  // namespace dirpose::cli
