#include "lsnw/cli.hpp"

int main(int argc, char** argv)
{
  return lsnw::run_cli(argc, argv);
}
