#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace sobex;
  CLI::App app{"Sobolev homeomorphic extensions: domains, boundary maps, energies and sharpness examples", "sobex"};
  app.require_subcommand(1);
  cli::add_geometry_commands(app);
  cli::add_analysis_commands(app);
  cli::add_sharpness_commands(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_name() != "RequiredError" || app.get_subcommands().empty()) std::cerr << app.help();
    return 2;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return cli::status();
}
