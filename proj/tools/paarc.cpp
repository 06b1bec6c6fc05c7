#include "paarc/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace paarc::cli;
    CLI::App app{"Policy-aware fleet service engine and simulator"};
    app.require_subcommand(1);

    std::string scenario, policies, out, request, report;
    bool json = false;

    auto* run = app.add_subcommand("run", "Run a scenario and write the report JSON");
    run->add_option("--scenario", scenario, "Scenario JSON")->required();
    run->add_option("--policies", policies, "Policy file (defaults to the scenario's own)");
    run->add_option("--out", out, "Report output path")->required();
    run->add_flag("--json", json, "Print the summary as JSON");

    auto* pol = app.add_subcommand("policy", "Policy file tools");
    pol->require_subcommand(1);
    auto* check = pol->add_subcommand("check", "Parse and check a policy file");
    check->add_option("file", policies, "Policy file")->required();
    check->add_flag("--json", json, "Print the result as JSON");

    auto* eval = app.add_subcommand("eval", "Decide one request against a policy file");
    eval->add_option("--request", request, "Decision request JSON")->required();
    eval->add_option("--policies", policies, "Policy file")->required();
    eval->add_flag("--json", json, "Accepted for symmetry; output is always JSON");

    AuditQuery q;
    auto* aud = app.add_subcommand("audit", "Query the audit log of a report");
    aud->add_option("--report", report, "Report JSON")->required();
    aud->add_option("--request-id", q.request_id, "Trace one request");
    aud->add_option("--effect", q.effect, "Permit, Deny, NotApplicable or Indeterminate");
    aud->add_option("--domain", q.domain, "device, network or application");
    aud->add_option("--actor", q.actor, "Actor name");
    aud->add_option("--action", q.action, "Action name");
    aud->add_option("--tick-from", q.tick_from, "First tick (inclusive)");
    aud->add_option("--tick-to", q.tick_to, "Last tick (inclusive)");
    aud->add_flag("--json", json, "Print records as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    if (run->parsed()) {
        std::optional<std::filesystem::path> p;
        if (!policies.empty()) p = policies;
        return cmd_run(scenario, p, out, json, std::cout, std::cerr);
    }
    if (check->parsed()) return cmd_policy_check(policies, json, std::cout, std::cerr);
    if (eval->parsed()) return cmd_eval(request, policies, std::cout, std::cerr);
    if (aud->parsed()) return cmd_audit(report, q, json, std::cout, std::cerr);
    return kInternalError;
}
