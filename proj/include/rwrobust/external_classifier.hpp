#pragma once

#include "rwrobust/classifier.hpp"

#include <chrono>
#include <memory>
#include <mutex>
#include <string>

namespace rwr {

enum class OutputKind { Classification, Regression };

struct ExternalModelSpec {
    /// Run through /bin/sh -c.
    std::string command;
    std::size_t feature_count = 0;
    std::chrono::milliseconds timeout{30000};
    /// Lines written before the handle waits for the matching answers.
    std::size_t batch_size = 4096;
    OutputKind output = OutputKind::Classification;
};

/// Black-box model living in a child process that speaks the line protocol:
/// one comma-separated sample per line on its stdin, one label token per line
/// on its stdout. The child is started lazily on first use and killed when
/// the handle is destroyed. Calls on one handle are serialized; spawn()
/// creates a fresh process for another worker.
class ExternalClassifier final : public Classifier {
public:
    explicit ExternalClassifier(ExternalModelSpec spec);
    ~ExternalClassifier() override;

    ExternalClassifier(const ExternalClassifier&) = delete;
    ExternalClassifier& operator=(const ExternalClassifier&) = delete;

    std::vector<Label> predict(const SampleMatrix& batch) const override;
    std::size_t feature_count() const override { return spec_.feature_count; }
    std::unique_ptr<Classifier> spawn() const override;

    const ExternalModelSpec& spec() const noexcept { return spec_; }

private:
    struct Process;

    ExternalModelSpec spec_;
    mutable std::mutex mutex_;
    mutable std::unique_ptr<Process> process_;
};

/// Serializes one sample as protocol text, without the trailing newline.
std::string encode_protocol_line(const Eigen::Ref<const Eigen::RowVectorXd>& x);

} // namespace rwr
