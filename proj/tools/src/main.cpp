#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "commands.hpp"
#include "common.hpp"
#include "dirpose/errors.hpp"

int main(int argc, char** argv) {
  using namespace dirpose;
  using namespace dirpose::cli;

  CLI::App app{"Directional relative-pose toolkit: spherical distribution "
               "grids, SO(3) projections, derotation, synthetic wide-baseline "
               "datasets, and evaluation."};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Read defaults from a TOML/INI file "
                                 "(flags take precedence)");
  app.require_subcommand(1);

  register_gen(app);
  register_fit(app);
  register_pipeline(app);
  register_viz(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const DivergedFit& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    // DegenerateDirection, SingularInput, DegenerateFrame,
    // AmbiguousHalfRotation.
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
