#include <cstdio>
int main() { std::puts("hanrec placeholder"); }
