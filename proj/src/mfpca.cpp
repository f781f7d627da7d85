#include "fdaprog/mfpca.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fdaprog/error.hpp"

namespace fdaprog::mfpca {

namespace {

const char* kModule = "mfpca";

// 4-point Gauss-Legendre on [-1,1]: exact for polynomials up to degree 7.
constexpr double kGlNodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
constexpr double kGlWeights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                  0.3478548451374538};

struct SymSqrt {
    Eigen::MatrixXd half;      // W^{1/2}
    Eigen::MatrixXd inv_half;  // W^{-1/2}
};

SymSqrt symmetric_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError(kModule, "Gram eigendecomposition failed");
    const auto& vals = es.eigenvalues();
    if (vals.minCoeff() <= 0.0)
        throw NumericalError(kModule, "Gram matrix not positive definite (min eigenvalue " +
                                          std::to_string(vals.minCoeff()) + ")");
    Eigen::VectorXd sq = vals.cwiseSqrt();
    SymSqrt out;
    out.half = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
    out.inv_half = es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    return out;
}

void check_model_basis(const MfpcaModel& model, const std::vector<smoothing::FunctionalCurve>& curves) {
    if (static_cast<int>(curves.size()) != model.sensors())
        throw DomainError(kModule, "expected " + std::to_string(model.sensors()) + " curves, got " +
                                       std::to_string(curves.size()));
    for (const auto& c : curves)
        if (!(*c.basis == *model.basis)) throw DomainError(kModule, "curve basis does not match the model basis");
}

Eigen::VectorXd stack_coefficients(const MfpcaModel& model,
                                   const std::vector<smoothing::FunctionalCurve>& curves) {
    const int B = model.basis->size();
    Eigen::VectorXd out(model.sensors() * B);
    for (int j = 0; j < model.sensors(); ++j) out.segment(j * B, B) = curves[static_cast<size_t>(j)].coef;
    return out;
}

void append_num(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    out.append(buf, ptr);
}

}  // namespace

Eigen::MatrixXd gram_matrix(const smoothing::BasisSpec& spec) {
    const int B = spec.size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(B, B);
    const auto& tau = spec.knots;
    for (size_t k = 0; k + 1 < tau.size(); ++k) {
        double a = tau[k], b = tau[k + 1];
        if (!(b > a)) continue;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 4; ++q) {
            double t = mid + half * kGlNodes[q];
            Eigen::VectorXd phi = smoothing::basis_eval(spec, t, 0);
            g.noalias() += (half * kGlWeights[q]) * phi * phi.transpose();
        }
    }
    return g;
}

smoothing::FunctionalCurve MfpcaModel::mean_curve(int sensor) const {
    const int B = basis->size();
    return {basis, mean_coef.segment(sensor * B, B)};
}

smoothing::FunctionalCurve MfpcaModel::eigenfunction(int component, int sensor) const {
    const int B = basis->size();
    return {basis, eigenfunction_coef.col(component).segment(sensor * B, B)};
}

MfpcaModel fit(const MultivariateFunctionalSample& sample, const FitOptions& options) {
    const int n = sample.n();
    const int J = sample.sensors();
    if (n < 2) throw DomainError(kModule, "fit needs at least 2 engines");
    if (J < 1) throw DomainError(kModule, "fit needs at least 1 sensor");
    const int B = sample.basis->size();

    MfpcaModel model;
    model.basis = sample.basis;
    model.sensor_names = sample.sensor_names;
    model.n = n;
    model.scaling = options.scaling;
    model.gram = gram_matrix(*sample.basis);

    Eigen::MatrixXd coef(n, J * B);
    model.train_unit_ids.resize(static_cast<size_t>(n));
    model.train_endpoints.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& eng = sample.engines[static_cast<size_t>(i)];
        if (static_cast<int>(eng.curves.size()) != J)
            throw DomainError(kModule, "unit " + std::to_string(eng.unit_id) + ": expected " + std::to_string(J) +
                                           " curves");
        for (int j = 0; j < J; ++j) {
            const auto& c = eng.curves[static_cast<size_t>(j)];
            if (!(*c.basis == *sample.basis))
                throw DomainError(kModule, "unit " + std::to_string(eng.unit_id) + ": curve basis mismatch");
            coef.row(i).segment(j * B, B) = c.coef.transpose();
        }
        model.train_unit_ids[static_cast<size_t>(i)] = eng.unit_id;
        model.train_endpoints[static_cast<size_t>(i)] = eng.endpoint_cycle;
    }

    model.mean_coef = coef.colwise().mean().transpose();
    Eigen::MatrixXd centered = coef.rowwise() - model.mean_coef.transpose();

    // Optional per-sensor scale: integrated pointwise variance of the block.
    model.sensor_scale = Eigen::VectorXd::Ones(J);
    if (options.scaling == Scaling::kVariance) {
        for (int j = 0; j < J; ++j) {
            double ss = 0.0;
            for (int i = 0; i < n; ++i) {
                Eigen::VectorXd block = centered.row(i).segment(j * B, B).transpose();
                ss += block.dot(model.gram * block);
            }
            double var = ss / static_cast<double>(n - 1);
            if (var <= 0.0)
                throw NumericalError(kModule, "sensor " + model.sensor_names[static_cast<size_t>(j)] +
                                                  " has zero variance; cannot scale");
            model.sensor_scale(j) = std::sqrt(var);
            centered.middleCols(j * B, B) /= model.sensor_scale(j);
        }
    }

    SymSqrt w = symmetric_sqrt(model.gram);
    Eigen::MatrixXd w_half = Eigen::MatrixXd::Zero(J * B, J * B);
    Eigen::MatrixXd w_inv_half = Eigen::MatrixXd::Zero(J * B, J * B);
    for (int j = 0; j < J; ++j) {
        w_half.block(j * B, j * B, B, B) = w.half;
        w_inv_half.block(j * B, j * B, B, B) = w.inv_half;
    }

    Eigen::MatrixXd cw = centered * w_half;  // n x J*B
    Eigen::MatrixXd m = cw.transpose() * cw / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError(kModule, "covariance eigendecomposition failed");

    // Ascending from Eigen; reorder descending and clamp tiny negatives.
    const int total = J * B;
    Eigen::VectorXd all_vals(total);
    Eigen::MatrixXd all_vecs(total, total);
    for (int k = 0; k < total; ++k) {
        all_vals(k) = std::max(es.eigenvalues()(total - 1 - k), 0.0);
        all_vecs.col(k) = es.eigenvectors().col(total - 1 - k);
    }
    model.total_variance = all_vals.sum();

    const int max_q = std::min(n - 1, total);
    int q = options.q;
    if (q <= 0) {
        double target = options.variance_target * model.total_variance;
        double cum = 0.0;
        q = max_q;
        for (int k = 0; k < max_q; ++k) {
            cum += all_vals(k);
            if (cum >= target) {
                q = k + 1;
                break;
            }
        }
        q = std::max(q, std::min(options.min_q, max_q));
    }
    if (q > max_q) {
        std::cerr << "[mfpca] warning: q=" << q << " exceeds rank bound " << max_q << ", truncating\n";
        q = max_q;
    }

    model.eigenvalues = all_vals.head(q);
    model.eigenfunction_coef = w_inv_half * all_vecs.leftCols(q);
    model.train_scores = cw * all_vecs.leftCols(q);  // = centered * W * eigfun_coef

    // Orientation: scores correlate non-negatively with training lifetimes;
    // an uncorrelated component gets its largest-|coefficient| entry positive.
    Eigen::VectorXd life(n);
    for (int i = 0; i < n; ++i) life(i) = static_cast<double>(model.train_endpoints[static_cast<size_t>(i)]);
    Eigen::VectorXd life_c = life.array() - life.mean();
    for (int k = 0; k < q; ++k) {
        double corr = model.train_scores.col(k).dot(life_c);
        bool flip;
        if (corr != 0.0) {
            flip = corr < 0.0;
        } else {
            int idx = 0;
            model.eigenfunction_coef.col(k).cwiseAbs().maxCoeff(&idx);
            flip = model.eigenfunction_coef(idx, k) < 0.0;
        }
        if (flip) {
            model.eigenfunction_coef.col(k) = -model.eigenfunction_coef.col(k);
            model.train_scores.col(k) = -model.train_scores.col(k);
        }
    }

    model.train_labels.assign(static_cast<size_t>(n), 0);
    return model;
}

Eigen::VectorXd score(const MfpcaModel& model, const std::vector<smoothing::FunctionalCurve>& engine_curves) {
    check_model_basis(model, engine_curves);
    const int B = model.basis->size();
    const int J = model.sensors();
    Eigen::VectorXd centered = stack_coefficients(model, engine_curves) - model.mean_coef;
    Eigen::VectorXd weighted(J * B);
    for (int j = 0; j < J; ++j)
        weighted.segment(j * B, B) = model.gram * (centered.segment(j * B, B) / model.sensor_scale(j));
    return model.eigenfunction_coef.transpose() * weighted;
}

std::vector<smoothing::FunctionalCurve> reconstruct(const MfpcaModel& model, const Eigen::VectorXd& scores) {
    if (scores.size() > model.q())
        throw DomainError(kModule, "reconstruct: " + std::to_string(scores.size()) + " scores exceed " +
                                       std::to_string(model.q()) + " available components");
    const int B = model.basis->size();
    Eigen::VectorXd coef = model.mean_coef;
    for (int k = 0; k < scores.size(); ++k) {
        Eigen::VectorXd contrib = model.eigenfunction_coef.col(k) * scores(k);
        for (int j = 0; j < model.sensors(); ++j)
            coef.segment(j * B, B) += contrib.segment(j * B, B) * model.sensor_scale(j);
    }
    std::vector<smoothing::FunctionalCurve> out;
    out.reserve(static_cast<size_t>(model.sensors()));
    for (int j = 0; j < model.sensors(); ++j)
        out.push_back({model.basis, coef.segment(j * B, B)});
    return out;
}

std::vector<VarianceShare> explained_variance(const MfpcaModel& model) {
    std::vector<VarianceShare> out;
    double cum = 0.0;
    for (int k = 0; k < model.q(); ++k) {
        double ratio = model.total_variance > 0.0 ? model.eigenvalues(k) / model.total_variance : 0.0;
        cum += ratio;
        out.push_back({model.eigenvalues(k), ratio, cum});
    }
    return out;
}

double inner_product(const MfpcaModel& model, const std::vector<smoothing::FunctionalCurve>& a,
                     const std::vector<smoothing::FunctionalCurve>& b) {
    check_model_basis(model, a);
    check_model_basis(model, b);
    double sum = 0.0;
    for (int j = 0; j < model.sensors(); ++j)
        sum += a[static_cast<size_t>(j)].coef.dot(model.gram * b[static_cast<size_t>(j)].coef);
    return sum;
}

std::string serialize(const MfpcaModel& model) {
    std::string out = "fdaprog-mfpca v1\n";
    auto line = [&out](auto&&... parts) {
        ((out += parts), ...);
        out += '\n';
    };
    const int B = model.basis->size();
    const int J = model.sensors();
    line("basis degree=", std::to_string(model.basis->degree), " interior=",
         std::to_string(model.basis->interior_knots), " penalty=", std::to_string(model.basis->penalty_order));
    out += "sensors";
    for (const auto& name : model.sensor_names) out += " " + name;
    out += '\n';
    line("shape n=", std::to_string(model.n), " J=", std::to_string(J), " B=", std::to_string(B), " q=",
         std::to_string(model.q()));
    line("scaling ", model.scaling == Scaling::kVariance ? "variance" : "none");
    out += "sensor_scale";
    for (int j = 0; j < J; ++j) {
        out += ' ';
        append_num(out, model.sensor_scale(j));
    }
    out += '\n';
    out += "total_variance ";
    append_num(out, model.total_variance);
    out += '\n';
    out += "units";
    for (int id : model.train_unit_ids) out += ' ' + std::to_string(id);
    out += '\n';
    out += "endpoints";
    for (int t : model.train_endpoints) out += ' ' + std::to_string(t);
    out += '\n';
    out += "labels";
    for (int g : model.train_labels) out += ' ' + std::to_string(g);
    out += '\n';
    out += "mean";
    for (int i = 0; i < model.mean_coef.size(); ++i) {
        out += ' ';
        append_num(out, model.mean_coef(i));
    }
    out += '\n';
    out += "eigenvalues";
    for (int k = 0; k < model.q(); ++k) {
        out += ' ';
        append_num(out, model.eigenvalues(k));
    }
    out += '\n';
    for (int k = 0; k < model.q(); ++k) {
        out += "eigenfunction " + std::to_string(k);
        for (int i = 0; i < model.eigenfunction_coef.rows(); ++i) {
            out += ' ';
            append_num(out, model.eigenfunction_coef(i, k));
        }
        out += '\n';
    }
    for (int i = 0; i < model.n; ++i) {
        out += "scores " + std::to_string(model.train_unit_ids[static_cast<size_t>(i)]);
        for (int k = 0; k < model.q(); ++k) {
            out += ' ';
            append_num(out, model.train_scores(i, k));
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double to_num(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("mfpca", "bad number in model file: '" + s + "'");
    return v;
}

int field_int(const std::string& tok, const std::string& key) {
    if (tok.rfind(key + "=", 0) != 0) throw ParseError("mfpca", "expected " + key + "=..., got '" + tok + "'");
    return static_cast<int>(to_num(tok.substr(key.size() + 1)));
}

}  // namespace

MfpcaModel deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "fdaprog-mfpca v1")
        throw ParseError(kModule, "model file: unknown header '" + line + "'");

    MfpcaModel model;
    int J = 0, B = 0, q = 0;

    while (std::getline(in, line)) {
        auto toks = tokens_of(line);
        if (toks.empty()) continue;
        const std::string& tag = toks[0];
        if (tag == "basis") {
            int degree = field_int(toks.at(1), "degree");
            int interior = field_int(toks.at(2), "interior");
            int penalty = field_int(toks.at(3), "penalty");
            model.basis = std::make_shared<smoothing::BasisSpec>(
                smoothing::BasisSpec::cubic_on_unit(interior, degree, penalty));
            model.gram = gram_matrix(*model.basis);
        } else if (tag == "sensors") {
            model.sensor_names.assign(toks.begin() + 1, toks.end());
        } else if (tag == "shape") {
            model.n = field_int(toks.at(1), "n");
            J = field_int(toks.at(2), "J");
            B = field_int(toks.at(3), "B");
            q = field_int(toks.at(4), "q");
            if (!model.basis || model.basis->size() != B)
                throw ParseError(kModule, "model file: basis dimension mismatch");
            if (static_cast<int>(model.sensor_names.size()) != J)
                throw ParseError(kModule, "model file: sensor count mismatch");
            model.mean_coef.setZero(J * B);
            model.sensor_scale.setOnes(J);
            model.eigenvalues.setZero(q);
            model.eigenfunction_coef.setZero(J * B, q);
            model.train_scores.setZero(model.n, q);
        } else if (tag == "scaling") {
            model.scaling = toks.at(1) == "variance" ? Scaling::kVariance : Scaling::kNone;
        } else if (tag == "sensor_scale") {
            for (int j = 0; j < J; ++j) model.sensor_scale(j) = to_num(toks.at(static_cast<size_t>(1 + j)));
        } else if (tag == "total_variance") {
            model.total_variance = to_num(toks.at(1));
        } else if (tag == "units") {
            model.train_unit_ids.clear();
            for (size_t i = 1; i < toks.size(); ++i) model.train_unit_ids.push_back(static_cast<int>(to_num(toks[i])));
        } else if (tag == "endpoints") {
            model.train_endpoints.clear();
            for (size_t i = 1; i < toks.size(); ++i)
                model.train_endpoints.push_back(static_cast<int>(to_num(toks[i])));
        } else if (tag == "labels") {
            model.train_labels.clear();
            for (size_t i = 1; i < toks.size(); ++i) model.train_labels.push_back(static_cast<int>(to_num(toks[i])));
        } else if (tag == "mean") {
            for (int i = 0; i < J * B; ++i) model.mean_coef(i) = to_num(toks.at(static_cast<size_t>(1 + i)));
        } else if (tag == "eigenvalues") {
            for (int k = 0; k < q; ++k) model.eigenvalues(k) = to_num(toks.at(static_cast<size_t>(1 + k)));
        } else if (tag == "eigenfunction") {
            int k = static_cast<int>(to_num(toks.at(1)));
            for (int i = 0; i < J * B; ++i) model.eigenfunction_coef(i, k) = to_num(toks.at(static_cast<size_t>(2 + i)));
        } else if (tag == "scores") {
            int unit = static_cast<int>(to_num(toks.at(1)));
            auto it = std::find(model.train_unit_ids.begin(), model.train_unit_ids.end(), unit);
            if (it == model.train_unit_ids.end())
                throw ParseError(kModule, "model file: scores for unknown unit " + std::to_string(unit));
            int row = static_cast<int>(it - model.train_unit_ids.begin());
            for (int k = 0; k < q; ++k) model.train_scores(row, k) = to_num(toks.at(static_cast<size_t>(2 + k)));
        } else {
            throw ParseError(kModule, "model file: unknown section '" + tag + "'");
        }
    }
    if (!model.basis || model.n == 0) throw ParseError(kModule, "model file: incomplete");
    return model;
}

void save(const MfpcaModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(kModule, "cannot write model file: " + path);
    out << serialize(model);
}

MfpcaModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(kModule, "cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

}  // namespace fdaprog::mfpca
