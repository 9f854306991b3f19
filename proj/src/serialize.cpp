#include "blendids/serialize.hpp"

#include <nlohmann/json.hpp>

#include "blendids/errors.hpp"

namespace blendids {

namespace {

BaseKind base_kind_from_string(const std::string& s) {
    if (s == "svm") return BaseKind::Svm;
    if (s == "naive_bayes") return BaseKind::NaiveBayes;
    if (s == "decision_tree") return BaseKind::DecisionTree;
    throw DataError("unknown base model kind '" + s + "' in bundle");
}

} // namespace

nlohmann::json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows}, {"cols", m.cols}, {"values", m.values}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
    Matrix m;
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.values = j.at("values").get<std::vector<double>>();
    if (m.values.size() != m.rows * m.cols) throw DataError("matrix payload size mismatch");
    return m;
}

// Nodes serialize as [feature, threshold, left, right, counts] tuples; -1
// feature marks a leaf.
nlohmann::json tree_to_json(const TreeParams& tree) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes) {
        nodes.push_back({n.feature, n.threshold, n.left, n.right, n.counts});
    }
    return {{"nodes", nodes}};
}

TreeParams tree_from_json(const nlohmann::json& j) {
    TreeParams tree;
    for (const auto& n : j.at("nodes")) {
        TreeNode node;
        node.feature = n.at(0).get<int>();
        node.threshold = n.at(1).get<double>();
        node.left = n.at(2).get<int>();
        node.right = n.at(3).get<int>();
        node.counts = n.at(4).get<std::vector<double>>();
        tree.nodes.push_back(std::move(node));
    }
    return tree;
}

nlohmann::json base_model_to_json(const BaseModel& model) {
    nlohmann::json j;
    j["kind"] = to_string(model.kind);
    j["classes"] = model.classes;
    j["feature_count"] = model.feature_count;
    switch (model.kind) {
        case BaseKind::Svm: {
            const auto& svm = std::get<SvmParams>(model.params);
            nlohmann::json machines = nlohmann::json::array();
            for (const auto& m : svm.machines) {
                machines.push_back({{"weights", m.weights}, {"bias", m.bias}});
            }
            j["svm"] = {{"lambda", svm.lambda}, {"epochs", svm.epochs}, {"machines", machines}};
            break;
        }
        case BaseKind::NaiveBayes: {
            const auto& nb = std::get<NaiveBayesParams>(model.params);
            j["naive_bayes"] = {{"log_priors", nb.log_priors},
                                {"means", matrix_to_json(nb.means)},
                                {"variances", matrix_to_json(nb.variances)},
                                {"variance_floor", nb.variance_floor}};
            break;
        }
        case BaseKind::DecisionTree:
            j["tree"] = tree_to_json(std::get<TreeParams>(model.params));
            break;
    }
    return j;
}

BaseModel base_model_from_json(const nlohmann::json& j) {
    BaseModel model;
    model.kind = base_kind_from_string(j.at("kind").get<std::string>());
    model.classes = j.at("classes").get<int>();
    model.feature_count = j.at("feature_count").get<std::size_t>();
    switch (model.kind) {
        case BaseKind::Svm: {
            SvmParams svm;
            const auto& s = j.at("svm");
            svm.lambda = s.at("lambda").get<double>();
            svm.epochs = s.at("epochs").get<std::size_t>();
            for (const auto& m : s.at("machines")) {
                svm.machines.push_back(
                    {m.at("weights").get<std::vector<double>>(), m.at("bias").get<double>()});
            }
            model.params = std::move(svm);
            break;
        }
        case BaseKind::NaiveBayes: {
            NaiveBayesParams nb;
            const auto& s = j.at("naive_bayes");
            nb.log_priors = s.at("log_priors").get<std::vector<double>>();
            nb.means = matrix_from_json(s.at("means"));
            nb.variances = matrix_from_json(s.at("variances"));
            nb.variance_floor = s.at("variance_floor").get<double>();
            model.params = std::move(nb);
            break;
        }
        case BaseKind::DecisionTree:
            model.params = tree_from_json(j.at("tree"));
            break;
    }
    return model;
}

nlohmann::json forest_to_json(const ForestModel& model) {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : model.trees) trees.push_back(tree_to_json(t));
    return {{"classes", model.classes},
            {"feature_count", model.feature_count},
            {"features_per_split", model.features_per_split},
            {"tree_seeds", model.tree_seeds},
            {"oob_indices", model.oob_indices},
            {"trees", trees}};
}

ForestModel forest_from_json(const nlohmann::json& j) {
    ForestModel model;
    model.classes = j.at("classes").get<int>();
    model.feature_count = j.at("feature_count").get<std::size_t>();
    model.features_per_split = j.at("features_per_split").get<std::size_t>();
    model.tree_seeds = j.at("tree_seeds").get<std::vector<std::uint64_t>>();
    model.oob_indices = j.at("oob_indices").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& t : j.at("trees")) model.trees.push_back(tree_from_json(t));
    return model;
}

nlohmann::json net_to_json(const NetModel& net) {
    nlohmann::json weights = nlohmann::json::array();
    for (const auto& w : net.weights) weights.push_back(matrix_to_json(w));
    return {{"layer_sizes", net.layer_sizes},
            {"weights", weights},
            {"biases", net.biases},
            {"output_mode", to_string(net.output_mode)},
            {"final_loss", net.final_loss}};
}

NetModel net_from_json(const nlohmann::json& j) {
    NetModel net;
    net.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    for (const auto& w : j.at("weights")) net.weights.push_back(matrix_from_json(w));
    net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    net.output_mode = output_mode_from_string(j.at("output_mode").get<std::string>());
    net.final_loss = j.at("final_loss").get<double>();
    return net;
}

nlohmann::json split_plan_to_json(const SplitPlan& plan) {
    return {{"train_indices", plan.train_indices},
            {"test_indices", plan.test_indices},
            {"ratio", format_ratio(plan.ratio)},
            {"seed", plan.seed}};
}

SplitPlan split_plan_from_json(const nlohmann::json& j) {
    SplitPlan plan;
    plan.train_indices = j.at("train_indices").get<std::vector<std::size_t>>();
    plan.test_indices = j.at("test_indices").get<std::vector<std::size_t>>();
    plan.ratio = parse_ratio(j.at("ratio").get<std::string>());
    plan.seed = j.at("seed").get<std::uint64_t>();
    return plan;
}

nlohmann::json blend_to_json(const BlendEnsemble& ensemble) {
    nlohmann::json bases = nlohmann::json::array();
    for (const auto& b : ensemble.bases) bases.push_back(base_model_to_json(b));
    return {{"bases", bases},
            {"forest", forest_to_json(ensemble.forest)},
            {"meta_mode", to_string(ensemble.meta_mode)},
            {"concat_raw", ensemble.concat_raw},
            {"blend_split", split_plan_to_json(ensemble.blend_split)}};
}

BlendEnsemble blend_from_json(const nlohmann::json& j) {
    BlendEnsemble ensemble;
    const auto& bases = j.at("bases");
    if (bases.size() != 3) throw DataError("bundle must carry exactly three base models");
    for (std::size_t i = 0; i < 3; ++i) ensemble.bases[i] = base_model_from_json(bases[i]);
    ensemble.forest = forest_from_json(j.at("forest"));
    ensemble.meta_mode = meta_mode_from_string(j.at("meta_mode").get<std::string>());
    ensemble.concat_raw = j.at("concat_raw").get<bool>();
    ensemble.blend_split = split_plan_from_json(j.at("blend_split"));
    return ensemble;
}

nlohmann::json final_choice_to_json(const FinalChoice& choice) {
    nlohmann::json passes = nlohmann::json::array();
    for (const auto& row : choice.gate.passes) passes.push_back(row);
    return {{"chosen", to_string(choice.chosen)},
            {"forest_correct", choice.forest_correct},
            {"ann_correct", choice.ann_correct},
            {"validation_size", choice.validation_size},
            {"forest_accuracy", choice.forest_accuracy},
            {"ann_accuracy", choice.ann_accuracy},
            {"gate",
             {{"confidence", choice.gate.confidence},
              {"model_names", choice.gate.model_names},
              {"performance", matrix_to_json(choice.gate.performance)},
              {"best_per_class", choice.gate.best_per_class},
              {"threshold_per_class", choice.gate.threshold_per_class},
              {"passes", passes}}}};
}

FinalChoice final_choice_from_json(const nlohmann::json& j) {
    FinalChoice choice;
    choice.chosen = final_kind_from_string(j.at("chosen").get<std::string>());
    choice.forest_correct = j.at("forest_correct").get<std::size_t>();
    choice.ann_correct = j.at("ann_correct").get<std::size_t>();
    choice.validation_size = j.at("validation_size").get<std::size_t>();
    choice.forest_accuracy = j.at("forest_accuracy").get<double>();
    choice.ann_accuracy = j.at("ann_accuracy").get<double>();
    const auto& g = j.at("gate");
    choice.gate.confidence = g.at("confidence").get<double>();
    choice.gate.model_names = g.at("model_names").get<std::vector<std::string>>();
    choice.gate.performance = matrix_from_json(g.at("performance"));
    choice.gate.best_per_class = g.at("best_per_class").get<std::vector<double>>();
    choice.gate.threshold_per_class = g.at("threshold_per_class").get<std::vector<double>>();
    choice.gate.passes = g.at("passes").get<std::vector<std::vector<bool>>>();
    return choice;
}

} // namespace blendids
