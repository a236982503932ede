from tree_uncover.cli import main

main()
