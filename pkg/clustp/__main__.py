from clustp.cli import main

raise SystemExit(main())
